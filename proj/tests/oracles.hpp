#pragma once

// Independent reference computations for the test suites. Everything here
// deliberately avoids the solver paths under test: dense eigendecompositions
// instead of inverse iteration, an ODE shooting method instead of the
// discrete logistic solve, finite differences instead of the assembled
// Jacobian.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "bazykin/grid.hpp"
#include "bazykin/model.hpp"
#include "bazykin/rng.hpp"

namespace oracles {

struct DensePair {
  double lambda = 0.0;
  Eigen::VectorXd phi;
};

// Full symmetric eigendecomposition of -lap + diag(q); principal pair with
// the same orientation and quadrature normalization as the solver under test.
inline DensePair dense_principal(const bazykin::Grid& grid, const bazykin::ScalarField& q) {
  Eigen::MatrixXd a = bazykin::assemble_neg_laplacian(grid).matrix.toDense();
  for (int i = 0; i < grid.num_nodes(); ++i) a(i, i) += q[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  Eigen::VectorXd phi = eig.eigenvectors().col(0);
  int imax = 0;
  phi.cwiseAbs().maxCoeff(&imax);
  if (phi[imax] < 0) phi = -phi;
  phi /= std::sqrt(grid.cell_measure() * phi.squaredNorm());
  return {eig.eigenvalues()[0], phi};
}

// All eigenvalues of the dense block linearization, sorted by ascending real
// part (ties by imaginary part).
inline std::vector<std::complex<double>> dense_spectrum(const bazykin::StateVector& state,
                                                        const bazykin::ModelParams& p) {
  const Eigen::MatrixXd jac = bazykin::jacobian(state, p).matrix.toDense();
  Eigen::EigenSolver<Eigen::MatrixXd> eig(jac);
  std::vector<std::complex<double>> mus(eig.eigenvalues().size());
  for (int i = 0; i < eig.eigenvalues().size(); ++i) mus[i] = eig.eigenvalues()[i];
  std::sort(mus.begin(), mus.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return mus;
}

// Location of the first return to zero of the solution of w'' = -w(rate - w),
// w(0) = 0, w'(0) = slope, by fixed-step RK4 with linear interpolation at the
// crossing. Returns +inf if w blows up or never comes back within x_end.
inline double logistic_first_zero(double rate, double slope, double x_end, int nsteps) {
  const double h = x_end / nsteps;
  double w = 0.0, wp = slope, x = 0.0;
  auto acc = [rate](double wi) { return -wi * (rate - wi); };
  for (int i = 0; i < nsteps; ++i) {
    const double k1w = wp, k1p = acc(w);
    const double k2w = wp + 0.5 * h * k1p, k2p = acc(w + 0.5 * h * k1w);
    const double k3w = wp + 0.5 * h * k2p, k3p = acc(w + 0.5 * h * k2w);
    const double k4w = wp + h * k3p, k4p = acc(w + h * k3w);
    const double wn = w + h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    const double pn = wp + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    if (i > 0 && wn <= 0.0) return x + h * w / (w - wn);
    if (wn > 100.0) return std::numeric_limits<double>::infinity();
    w = wn;
    wp = pn;
    x += h;
  }
  return std::numeric_limits<double>::infinity();
}

// Nodal samples of the positive logistic profile on (0, length) by shooting:
// bisect the initial slope until the first zero lands on the far boundary,
// then integrate once more, recording values at the interior grid nodes.
inline std::vector<double> logistic_shooting(double rate, double length, int n) {
  const int coarse_steps = 200000;
  double lo = 0.1, hi = 40.0;
  for (int i = 0; i < 70; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (logistic_first_zero(rate, mid, 1.5 * length, coarse_steps) < length)
      lo = mid;
    else
      hi = mid;
  }
  const double slope = 0.5 * (lo + hi);

  const int m = 64;  // RK4 substeps per grid cell
  const double h = length / (n + 1) / m;
  double w = 0.0, wp = slope;
  auto acc = [rate](double wi) { return -wi * (rate - wi); };
  std::vector<double> vals;
  vals.reserve(n);
  for (int i = 0; static_cast<int>(vals.size()) < n; ++i) {
    const double k1w = wp, k1p = acc(w);
    const double k2w = wp + 0.5 * h * k1p, k2p = acc(w + 0.5 * h * k1w);
    const double k3w = wp + 0.5 * h * k2p, k3p = acc(w + 0.5 * h * k2w);
    const double k4w = wp + h * k3p, k4p = acc(w + h * k3w);
    w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    wp += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    if ((i + 1) % m == 0) vals.push_back(w);
  }
  return vals;
}

// Central finite difference of the system residual along a direction.
inline bazykin::StateVector fd_residual_derivative(const bazykin::StateVector& state,
                                                   const bazykin::ModelParams& p,
                                                   const bazykin::StateVector& dir,
                                                   double eps) {
  using bazykin::ScalarField;
  const bazykin::Grid& g = state.u.grid();
  auto shifted = [&](double sign) {
    return bazykin::StateVector{
        ScalarField(g, state.u.values() + sign * eps * dir.u.values()),
        ScalarField(g, state.v.values() + sign * eps * dir.v.values())};
  };
  const bazykin::StateVector plus = bazykin::residual(shifted(1.0), p);
  const bazykin::StateVector minus = bazykin::residual(shifted(-1.0), p);
  return {ScalarField(g, (plus.u.values() - minus.u.values()) / (2.0 * eps)),
          ScalarField(g, (plus.v.values() - minus.v.values()) / (2.0 * eps))};
}

// Smooth random potential: an offset plus four low sine modes.
inline bazykin::ScalarField random_potential(const bazykin::Grid& grid, bazykin::SplitMix& rng,
                                             double amplitude = 4.0) {
  const double c0 = rng.uniform(-amplitude, amplitude);
  double ck[4];
  for (double& c : ck) c = rng.uniform(-amplitude / 2, amplitude / 2);
  Eigen::VectorXd q(grid.num_nodes());
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < grid.num_nodes(); ++i) {
    const double x = grid.x(i) / grid.lx();
    double v = c0;
    for (int k = 0; k < 4; ++k) v += ck[k] * std::sin((k + 1) * pi * x);
    q[i] = v;
  }
  return {grid, std::move(q)};
}

// Smooth random positive state for Jacobian consistency checks.
inline bazykin::StateVector random_state(const bazykin::Grid& grid, bazykin::SplitMix& rng,
                                         double amplitude = 3.0) {
  Eigen::VectorXd u(grid.num_nodes()), v(grid.num_nodes());
  const double pi = 3.14159265358979323846;
  const double au = rng.uniform(0.1, amplitude), bu = rng.uniform(-1.0, 1.0);
  const double av = rng.uniform(0.1, amplitude), bv = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < grid.num_nodes(); ++i) {
    const double x = grid.x(i) / grid.lx();
    u[i] = au * std::sin(pi * x) + bu * std::sin(2 * pi * x) * 0.3;
    v[i] = av * std::sin(pi * x) + bv * std::sin(3 * pi * x) * 0.3;
  }
  return {bazykin::ScalarField(grid, std::move(u)), bazykin::ScalarField(grid, std::move(v))};
}

}  // namespace oracles
