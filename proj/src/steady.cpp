#include "bazykin/steady.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <utility>

#include "bazykin/constants.hpp"
#include "bazykin/eigen.hpp"
#include "bazykin/rng.hpp"

namespace bazykin {

namespace {

// Multiplicative deflation over previously found roots: each root z_k
// contributes the factor 1/||z - z_k||^2 + 1 in the quadrature norm.
struct Deflation {
  std::vector<Eigen::VectorXd> roots;
  double weight = 1.0;

  bool empty() const { return roots.empty(); }

  double factor(const Eigen::VectorXd& z) const {
    double m = 1.0;
    for (const auto& r : roots) {
      const double d2 = weight * (z - r).squaredNorm();
      if (d2 < 1e-300) return std::numeric_limits<double>::infinity();
      m *= 1.0 / d2 + 1.0;
    }
    return m;
  }

  // Logarithmic derivative of the factor along w: (grad M . w) / M.
  double dlog(const Eigen::VectorXd& z, const Eigen::VectorXd& w) const {
    double s = 0.0;
    for (const auto& r : roots) {
      const double d2 = weight * (z - r).squaredNorm();
      s -= 2.0 * weight * (z - r).dot(w) / (d2 * d2 + d2);
    }
    return s;
  }
};

void system_residual(const Eigen::SparseMatrix<double>& lap, const Eigen::VectorXd& z,
                     const ModelParams& p, Eigen::VectorXd& out) {
  const int n = static_cast<int>(z.size()) / 2;
  const auto u = z.head(n);
  const auto v = z.tail(n);
  out.resize(2 * n);
  out.head(n) = lap * u;
  out.tail(n) = lap * v;
  for (int i = 0; i < n; ++i) {
    const double f = 1.0 / ((1.0 + p.alpha * u[i]) * (1.0 + p.beta * v[i]));
    out[i] -= u[i] * (p.a - u[i] - p.b * v[i] * f);
    out[n + i] -= v[i] * (p.c - v[i] - p.d * u[i] * f);
  }
}

void system_jacobian(const Eigen::SparseMatrix<double>& lap, const Eigen::VectorXd& z,
                     const ModelParams& p, Eigen::SparseMatrix<double>& out) {
  const int n = static_cast<int>(z.size()) / 2;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * lap.nonZeros() + 4 * n);
  for (int k = 0; k < lap.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(lap, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      trip.emplace_back(r, c, it.value());
      trip.emplace_back(r + n, c + n, it.value());
    }
  }
  for (int i = 0; i < n; ++i) {
    const double su = 1.0 + p.alpha * z[i];
    const double sv = 1.0 + p.beta * z[n + i];
    const double f = 1.0 / (su * sv);
    trip.emplace_back(i, i, -p.a + 2.0 * z[i] + p.b * z[n + i] * f / su);
    trip.emplace_back(i, i + n, p.b * z[i] * f / sv);
    trip.emplace_back(i + n, i, p.d * z[n + i] * f / su);
    trip.emplace_back(i + n, i + n, -p.c + 2.0 * z[n + i] + p.d * z[i] * f / sv);
  }
  out.resize(2 * n, 2 * n);
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
}

// Damped Newton on the (optionally deflated) system residual. The deflated
// direction is the plain Newton direction rescaled by
// tau = 1 / (1 - (grad M . delta) / M), so one factorization serves both.
// Line search decreases the deflated merit M(z) * ||F(z)||_inf; convergence
// is judged on the plain residual.
Eigen::VectorXd newton_system(const Eigen::SparseMatrix<double>& lap, Eigen::VectorXd z,
                              const ModelParams& p, const Deflation& deflation) {
  Eigen::VectorXd f, z_try, f_try;
  Eigen::SparseMatrix<double> jac;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  std::vector<double> history;

  system_residual(lap, z, p, f);
  double rn = f.cwiseAbs().maxCoeff();
  history.push_back(rn);

  for (int it = 0; it < tol::max_newton_iter; ++it) {
    if (rn < tol::newton) return z;

    system_jacobian(lap, z, p, jac);
    lu.compute(jac);
    if (lu.info() != Eigen::Success)
      throw convergence_error("singular Jacobian factorization (degenerate point)",
                              std::move(history));
    Eigen::VectorXd delta = lu.solve(-f);
    if (!delta.allFinite())
      throw convergence_error("Newton direction is not finite", std::move(history));

    double merit = rn;
    if (!deflation.empty()) {
      const double denom = 1.0 - deflation.dlog(z, delta);
      if (std::abs(denom) < 1e-14)
        throw convergence_error("deflated Newton direction degenerated", std::move(history));
      delta /= denom;
      merit *= deflation.factor(z);
    }

    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < tol::max_line_search; ++ls) {
      z_try = z + step * delta;
      system_residual(lap, z_try, p, f_try);
      double merit_try = f_try.cwiseAbs().maxCoeff();
      if (!deflation.empty()) merit_try *= deflation.factor(z_try);
      if (std::isfinite(merit_try) && merit_try <= (1.0 - 1e-4 * step) * merit) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw convergence_error("Newton line search stalled", std::move(history));

    z = z_try;
    f = f_try;
    rn = f.cwiseAbs().maxCoeff();
    history.push_back(rn);
  }
  if (rn < tol::newton) return z;
  throw convergence_error("Newton iteration cap exceeded", std::move(history));
}

SolutionRecord make_record(const Grid& g, const Eigen::VectorXd& z, const ModelParams& p) {
  const int n = g.num_nodes();
  StateVector state{ScalarField(g, z.head(n)), ScalarField(g, z.tail(n))};
  SolutionRecord rec;
  rec.residual_norm = residual_norm_inf(state, p);
  rec.state = std::move(state);
  rec.params = p;
  rec.classification = classify(rec.state);
  return rec;
}

}  // namespace

ScalarField solve_logistic(const Grid& grid, double rate) {
  if (!std::isfinite(rate)) throw precondition_error("logistic rate must be finite");
  const EigenPair base = principal_eigenpair(grid, ScalarField(grid));
  if (rate <= base.lambda + 1e-8) return ScalarField(grid);

  const int n = grid.num_nodes();
  const Eigen::SparseMatrix<double> lap = assemble_neg_laplacian(grid).matrix;
  Eigen::VectorXd w = (rate / base.phi.max()) * base.phi.values();

  auto res = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    out = lap * x - x.cwiseProduct(Eigen::VectorXd::Constant(n, rate) - x);
  };

  Eigen::VectorXd f, w_try, f_try;
  res(w, f);
  double rn = f.cwiseAbs().maxCoeff();
  std::vector<double> history{rn};
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;

  for (int it = 0; it < tol::max_newton_iter && rn >= tol::newton; ++it) {
    Eigen::SparseMatrix<double> jac = lap;
    for (int i = 0; i < n; ++i) jac.coeffRef(i, i) += 2.0 * w[i] - rate;
    solver.compute(jac);
    if (solver.info() != Eigen::Success)
      throw convergence_error("logistic Jacobian factorization failed", std::move(history));
    const Eigen::VectorXd delta = solver.solve(-f);

    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < tol::max_line_search; ++ls) {
      w_try = w + step * delta;
      res(w_try, f_try);
      const double rn_try = f_try.cwiseAbs().maxCoeff();
      if (std::isfinite(rn_try) && rn_try <= (1.0 - 1e-4 * step) * rn) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) throw convergence_error("logistic Newton diverged", std::move(history));
    w = w_try;
    f = f_try;
    rn = f.cwiseAbs().maxCoeff();
    history.push_back(rn);
  }
  if (rn >= tol::newton)
    throw convergence_error("logistic Newton iteration cap exceeded", std::move(history));
  if (w.minCoeff() <= 0.0 || w.maxCoeff() > rate + 1e-8)
    throw convergence_error("logistic state violates 0 < w <= rate", std::move(history));
  return {grid, std::move(w)};
}

SolutionRecord newton_solve(const StateVector& initial, const ModelParams& p) {
  p.validate();
  require_same_grid(initial);
  const Grid& g = initial.u.grid();
  const int n = g.num_nodes();

  // Clip the guess only; clipping iterates would change the root map.
  Eigen::VectorXd z(2 * n);
  z.head(n) = initial.u.values().cwiseMax(0.0);
  z.tail(n) = initial.v.values().cwiseMax(0.0);

  const Eigen::SparseMatrix<double> lap = assemble_neg_laplacian(g).matrix;
  z = newton_system(lap, std::move(z), p, Deflation{});
  return make_record(g, z, p);
}

std::vector<StateVector> default_seeds(const Grid& grid, const ModelParams& p,
                                       std::uint64_t seed) {
  p.validate();
  const ScalarField theta_a = solve_logistic(grid, p.a);
  const ScalarField theta_c = solve_logistic(grid, p.c);

  std::vector<StateVector> seeds;
  seeds.push_back({theta_a, theta_c});
  seeds.push_back({ScalarField(grid, 0.5 * theta_a.values()),
                   ScalarField(grid, 0.5 * theta_c.values())});

  // Saturation-layer seeds: at strong saturation extra solutions sit near the
  // semi-trivial states with the small species at the scale where
  // alpha * u (or beta * v) is order one.
  const double layer_u =
      std::min(0.75, 2.0 / (1.0 + p.alpha * std::max(theta_a.max(), 0.0)));
  const double layer_v =
      std::min(0.75, 2.0 / (1.0 + p.beta * std::max(theta_c.max(), 0.0)));
  seeds.push_back({ScalarField(grid, layer_u * theta_a.values()), theta_c});
  seeds.push_back({theta_a, ScalarField(grid, layer_v * theta_c.values())});

  // Log-uniform scale factors, alternately biasing one component toward full
  // strength: the extra solutions of interest sit near the semi-trivial
  // states, where one species is small and the other is close to its
  // logistic profile.
  SplitMix rng(seed ^ 0x5eedf00d12345678ull);
  const double lo = std::log(1e-4), hi = std::log(1.2);
  const double lo_full = std::log(0.25);
  for (int k = 0; k < 8; ++k) {
    const double ru = std::exp(rng.uniform(k % 2 == 0 ? lo : lo_full, hi));
    const double rv = std::exp(rng.uniform(k % 2 == 0 ? lo_full : lo, hi));
    seeds.push_back({ScalarField(grid, ru * theta_a.values()),
                     ScalarField(grid, rv * theta_c.values())});
  }
  return seeds;
}

std::vector<SolutionRecord> deflated_solve(const ModelParams& p,
                                           const std::vector<StateVector>& seeds,
                                           const DeflationOptions& options) {
  p.validate();
  if (seeds.empty()) throw precondition_error("deflated_solve needs at least one seed");
  const Grid& g = seeds.front().u.grid();
  const int n = g.num_nodes();
  const Eigen::SparseMatrix<double> lap = assemble_neg_laplacian(g).matrix;

  Deflation deflation;
  deflation.weight = g.cell_measure();
  std::vector<SolutionRecord> records;

  auto adopt = [&](const Eigen::VectorXd& z) {
    deflation.roots.push_back(z);
    SolutionRecord rec = make_record(g, z, p);
    if (rec.classification != Classification::indefinite) records.push_back(std::move(rec));
  };

  // The trivial and admissible semi-trivial states are exact roots; register
  // them up front so the search is always pushed toward new solutions.
  const double lambda1 = principal_eigenpair(g, ScalarField(g)).lambda;
  adopt(Eigen::VectorXd::Zero(2 * n));
  if (p.a > lambda1 + 1e-8) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
    z.head(n) = solve_logistic(g, p.a).values();
    adopt(z);
  }
  if (p.c > lambda1 + 1e-8) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
    z.tail(n) = solve_logistic(g, p.c).values();
    adopt(z);
  }

  auto is_known = [&](const Eigen::VectorXd& z) {
    for (const auto& r : deflation.roots)
      if ((z - r).cwiseAbs().maxCoeff() <= tol::distinct) return true;
    return false;
  };

  int attempts = 0;
  for (const StateVector& seed : seeds) {
    require_same_grid(seed);
    if (!(seed.u.grid() == g)) throw precondition_error("seeds live on different grids");
    Eigen::VectorXd z0(2 * n);
    z0.head(n) = seed.u.values().cwiseMax(0.0);
    z0.tail(n) = seed.v.values().cwiseMax(0.0);

    // Keep searching from this seed while it keeps producing new roots.
    while (attempts < options.max_attempts) {
      ++attempts;
      Eigen::VectorXd z;
      try {
        z = newton_system(lap, z0, p, deflation);
      } catch (const convergence_error&) {
        break;  // this seed is exhausted
      }
      if (is_known(z)) break;
      adopt(z);
    }
    if (attempts >= options.max_attempts) break;
  }
  return records;
}

bool check_apriori(const SolutionRecord& record) {
  const Grid& g = record.state.u.grid();
  const ModelParams& p = record.params;
  const ScalarField theta_a = solve_logistic(g, p.a);
  const ScalarField theta_c = solve_logistic(g, p.c);
  for (int i = 0; i < g.num_nodes(); ++i) {
    if (record.state.u[i] > p.a + 1e-8) return false;
    if (record.state.v[i] > p.c + 1e-8) return false;
    if (record.state.u[i] > theta_a[i] + 1e-6) return false;
    if (record.state.v[i] > theta_c[i] + 1e-6) return false;
  }
  return true;
}

SubSuperReport verify_sub_super(const Grid& grid, const ModelParams& p, double eps) {
  p.validate();
  const double lambda1 = principal_eigenpair(grid, ScalarField(grid)).lambda;
  if (!(eps > 0.0 && eps < std::min(p.a - lambda1, p.c - lambda1)))
    throw precondition_error("eps must satisfy 0 < eps < min(a - lambda1, c - lambda1)");

  const ScalarField ta = solve_logistic(grid, p.a);
  const ScalarField tc = solve_logistic(grid, p.c);
  const ScalarField tae = solve_logistic(grid, p.a - eps);
  const ScalarField tce = solve_logistic(grid, p.c - eps);

  const Eigen::SparseMatrix<double> lap = assemble_neg_laplacian(grid).matrix;
  const int n = grid.num_nodes();
  auto f = [&](double u, double v) {
    return 1.0 / ((1.0 + p.alpha * u) * (1.0 + p.beta * v));
  };

  // lap_of(w) means the discrete Laplacian (so minus the assembled operator).
  Eigen::VectorXd r1 = -(lap * ta.values());
  Eigen::VectorXd r2 = -(lap * tc.values());
  Eigen::VectorXd r3 = -(lap * tae.values());
  Eigen::VectorXd r4 = -(lap * tce.values());
  for (int i = 0; i < n; ++i) {
    r1[i] += ta[i] * (p.a - ta[i] - p.b * tce[i] * f(ta[i], tce[i]));
    r2[i] += tc[i] * (p.c - tc[i] - p.d * tae[i] * f(tae[i], tc[i]));
    r3[i] += tae[i] * (p.a - tae[i] - p.b * tc[i] * f(tae[i], tc[i]));
    r4[i] += tce[i] * (p.c - tce[i] - p.d * ta[i] * f(ta[i], tce[i]));
  }

  const double cut_u = 0.1 * tae.max();
  const double cut_v = 0.1 * tce.max();

  SubSuperReport report;
  report.eps = eps;
  for (int i = 0; i < n; ++i) {
    // Upper-solution checks need r <= 0, lower-solution checks need r >= 0.
    const double viol[4] = {std::max(r1[i], 0.0), std::max(r2[i], 0.0),
                            std::max(-r3[i], 0.0), std::max(-r4[i], 0.0)};
    const bool in_compact[4] = {tae[i] > cut_u, tce[i] > cut_v, tae[i] > cut_u,
                                tce[i] > cut_v};
    for (int k = 0; k < 4; ++k) {
      auto& q = report.inequality[k];
      q.max_violation = std::max(q.max_violation, viol[k]);
      if (viol[k] > 1e-8) ++q.violating_nodes;
      if (in_compact[k]) {
        q.max_violation_compact = std::max(q.max_violation_compact, viol[k]);
        if (viol[k] > 1e-8) ++q.violating_nodes_compact;
      }
    }
  }
  return report;
}

}  // namespace bazykin
