#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bazykin/bifurcation.hpp"
#include "bazykin/constants.hpp"
#include "bazykin/eigen.hpp"
#include "bazykin/steady.hpp"
#include "oracles.hpp"

using namespace bazykin;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("threshold limits and identities") {
  const Grid g = Grid::interval(kPi, 150);
  const double lambda1 = principal_eigenpair(g, ScalarField(g)).lambda;

  // b -> 0 collapses the potential.
  const ModelParams small_b{1.0, 1e-12, 5.0, 1.0, 0.0, 0.0};
  CHECK(std::abs(threshold_a0(g, small_b) - lambda1) < 1e-9);

  // b = 1, beta = 0 gives a0 = lambda_1(theta_c) = c by the shift identity.
  const ModelParams unit{1.0, 1.0, 5.0, 1.0, 0.0, 0.0};
  CHECK(std::abs(threshold_a0(g, unit) - 5.0) < 5e-6);

  // Raising beta lowers the potential, and a0 decreases toward lambda_1.
  double prev = threshold_a0(g, unit);
  for (const double beta : {1.0, 10.0, 100.0}) {
    const ModelParams p{1.0, 1.0, 5.0, 1.0, 0.0, beta};
    const double a0 = threshold_a0(g, p);
    CHECK(a0 < prev);
    CHECK(a0 > lambda1);
    prev = a0;
  }

  // Subcritical c leaves theta_c undefined.
  const ModelParams sub{1.0, 1.0, 0.5, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(threshold_a0(g, sub), precondition_error);
}

TEST_CASE("threshold_c0 is the exact mirror of threshold_a0") {
  const Grid g = Grid::interval(kPi, 120);
  const ModelParams p{5.0, 1.7, 4.0, 0.6, 0.8, 0.3};
  CHECK(threshold_c0(g, p) == threshold_a0(g, p.swapped()));
  CHECK(threshold_a0(g, p) == threshold_c0(g, p.swapped()));
}

TEST_CASE("threshold matches the dense oracle") {
  const Grid g = Grid::interval(kPi, 60);
  const ModelParams p{1.0, 1.0, 5.0, 1.0, 0.0, 0.0};
  const ScalarField theta_c = solve_logistic(g, p.c);
  const double a0 = threshold_a0(g, p);
  CHECK(std::abs(a0 - oracles::dense_principal(g, theta_c).lambda) < 1e-6);

  const ModelParams pc{5.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  const ScalarField theta_a = solve_logistic(g, pc.a);
  CHECK(std::abs(threshold_c0(g, pc) - oracles::dense_principal(g, theta_a).lambda) < 1e-6);
}

TEST_CASE("bifurcation data invariants") {
  const Grid g = Grid::interval(kPi, 150);
  const ModelParams p{1.0, 2.0, 5.0, 1e-3, 0.0, 0.5};
  const BifurcationData data = bifurcation_data_a(g, p);

  CHECK(data.phi.min() > 0.0);
  CHECK(data.psi.max() < 0.0);
  CHECK(std::abs(inner(data.phi, data.phi) - 1.0) < 1e-10);

  // alpha = 0: the indicator reduces to the positive integral of phi^3.
  double phi3 = 0.0;
  for (int i = 0; i < g.num_nodes(); ++i) phi3 += std::pow(data.phi[i], 3);
  phi3 *= g.cell_measure();
  CHECK(data.stability_indicator == doctest::Approx(phi3).epsilon(1e-12));
  CHECK(data.stability_indicator > 0.0);

  // b -> 0: the coupling terms carry the factor b, so coeff1 -> int phi^3 > 0.
  const ModelParams small_b{1.0, 1e-10, 5.0, 1e-3, 0.3, 0.5};
  const BifurcationData limit = bifurcation_data_a(g, small_b);
  double limit_phi3 = 0.0;
  for (int i = 0; i < g.num_nodes(); ++i) limit_phi3 += std::pow(limit.phi[i], 3);
  limit_phi3 *= g.cell_measure();
  CHECK(std::abs(limit.coeff1 - limit_phi3) < 1e-8);
  CHECK(limit.coeff1 > 0.0);
}

TEST_CASE("bifurcation data mirrors under the species swap") {
  const Grid g = Grid::interval(kPi, 120);
  const ModelParams p{1.0, 2.0, 5.0, 0.3, 0.7, 0.5};
  const BifurcationData on_a = bifurcation_data_a(g, p);
  const BifurcationData on_c = bifurcation_data_c(g, p.swapped());
  CHECK(on_a.threshold == on_c.threshold);
  CHECK(on_a.coeff1 == on_c.coeff1);
  CHECK(on_a.stability_indicator == on_c.stability_indicator);
  CHECK((on_a.phi.values() - on_c.phi.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((on_a.psi.values() - on_c.psi.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectrum at the origin decouples into the two diffusion blocks") {
  const Grid g = Grid::interval(kPi, 60);
  const ModelParams p{5.0, 1.0, 3.0, 1.0, 0.1, 0.1};
  const StateVector origin{ScalarField(g), ScalarField(g)};
  const auto mus = linearized_spectrum(origin, p, 6);

  const double lambda1 = principal_eigenpair(g, ScalarField(g)).lambda;
  // Smallest real parts are lambda_k - a, lambda_k - c with lambda_2 ~ 4.
  CHECK(std::abs(mus[0].real() - (lambda1 - 5.0)) < 1e-8);
  CHECK(std::abs(mus[1].real() - (lambda1 - 3.0)) < 1e-8);
  CHECK(stability_from_spectrum(mus) == Stability::unstable);

  const auto dense = oracles::dense_spectrum(origin, p);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(mus[i].real() - dense[i].real()) < 1e-8);
    CHECK(std::abs(mus[i].imag() - dense[i].imag()) < 1e-8);
  }
}

TEST_CASE("semi-trivial state is stable below the threshold") {
  const Grid g = Grid::interval(kPi, 100);
  const ModelParams p{2.0, 1.0, 5.0, 1.0, 0.0, 0.0};  // a0 = 5, a = 2 < a0
  const StateVector state{ScalarField(g), solve_logistic(g, p.c)};
  const auto mus = linearized_spectrum(state, p, 6);
  CHECK(stability_from_spectrum(mus) == Stability::stable);

  // Block triangular structure: the leading eigenvalue is the smaller of
  // a0 - a and lambda_1(2 theta_c - c).
  const double a0 = threshold_a0(g, p);
  const ScalarField q = pointwise([&](double t) { return 2.0 * t - p.c; },
                                  solve_logistic(g, p.c));
  const double block_v = principal_eigenpair(g, q).lambda;
  CHECK(std::abs(mus[0].real() - std::min(a0 - p.a, block_v)) < 1e-6);
}

TEST_CASE("spectrum matches the dense oracle at random states") {
  const Grid g = Grid::interval(kPi, 40);
  const ModelParams p{5.0, 1.2, 4.0, 0.9, 0.5, 0.3};
  SplitMix rng(17);
  for (int t = 0; t < 5; ++t) {
    const StateVector state = oracles::random_state(g, rng);
    const auto mus = linearized_spectrum(state, p, 6);
    const auto dense = oracles::dense_spectrum(state, p);
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(mus[i].real() - dense[i].real()) < 1e-8);
      CHECK(std::abs(mus[i].imag() - dense[i].imag()) < 1e-8);
    }
  }
}

TEST_CASE("branch continuation validates the first-order expansion") {
  const Grid g = Grid::interval(kPi, 120);
  const ModelParams p{1.0, 2.0, 5.0, 1e-3, 0.0, 0.5};
  const Branch branch = continue_branch(g, p, BranchKind::a_branch, 0.02, 4);
  REQUIRE(branch.complete);
  REQUIRE(branch.points.size() == 4);

  auto slope = [&](const BranchPoint& pt) {
    return (pt.param_value - branch.data.threshold) / pt.s;
  };
  const double r_a = 2.0 * slope(branch.points[1]) - slope(branch.points[3]);
  const double r_b = 2.0 * slope(branch.points[0]) - slope(branch.points[1]);
  const double extrapolated = (4.0 * r_b - r_a) / 3.0;
  CHECK(std::abs(extrapolated - branch.data.coeff1) < 0.05 * std::abs(branch.data.coeff1));

  auto shape_err = [&](const BranchPoint& pt) {
    double worst = 0.0;
    for (int i = 0; i < g.num_nodes(); ++i)
      worst = std::max(worst, std::abs(pt.state.u[i] / pt.s - branch.data.phi[i]));
    return worst;
  };
  CHECK(shape_err(branch.points[1]) / shape_err(branch.points[3]) <= 0.6);

  // mu(s)/s approaches the indicator; s recovered as the projection.
  const BranchPoint& tip = branch.points.back();
  CHECK(tip.s == doctest::Approx(0.02).epsilon(1e-9));
  CHECK(std::abs(tip.leading_eig.real() / tip.s - branch.data.stability_indicator) <
        0.1 * std::abs(branch.data.stability_indicator));
  CHECK(tip.stable);

  for (const auto& pt : branch.points) {
    CHECK(pt.state.u.min() > 0.0);
    CHECK(pt.state.v.min() > 0.0);
    ModelParams at = p;
    at.a = pt.param_value;
    CHECK(residual_norm_inf(pt.state, at) <= tol::newton);
    SolutionRecord rec{pt.state, at, residual_norm_inf(pt.state, at),
                       Classification::coexistence, Stability::undetermined};
    CHECK(check_apriori(rec));
  }
}

TEST_CASE("branch preconditions") {
  const Grid g = Grid::interval(kPi, 60);
  const ModelParams p{1.0, 2.0, 5.0, 1e-3, 0.0, 0.5};
  CHECK_THROWS_AS(continue_branch(g, p, BranchKind::a_branch, 0.6, 8), precondition_error);
  CHECK_THROWS_AS(continue_branch(g, p, BranchKind::a_branch, 0.02, 3), precondition_error);
}

TEST_CASE("c-branch of swapped parameters reproduces the a-branch") {
  const Grid g = Grid::interval(kPi, 100);
  const ModelParams p{1.0, 2.0, 5.0, 1e-3, 0.0, 0.5};
  const Branch on_a = continue_branch(g, p, BranchKind::a_branch, 0.02, 4);
  const Branch on_c = continue_branch(g, p.swapped(), BranchKind::c_branch, 0.02, 4);
  REQUIRE(on_a.complete);
  REQUIRE(on_c.complete);
  CHECK(std::abs(on_a.data.threshold - on_c.data.threshold) < 1e-10);
  CHECK(std::abs(on_a.data.coeff1 - on_c.data.coeff1) < 1e-10);
  for (std::size_t i = 0; i < on_a.points.size(); ++i) {
    CHECK(std::abs(on_a.points[i].param_value - on_c.points[i].param_value) < 1e-8);
    CHECK((on_a.points[i].state.u.values() - on_c.points[i].state.v.values())
              .cwiseAbs()
              .maxCoeff() < 1e-8);
  }
}
