#include "bazykin/bifurcation.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

#include "bazykin/constants.hpp"
#include "bazykin/eigen.hpp"
#include "bazykin/steady.hpp"

namespace bazykin {

namespace {

ScalarField positive_logistic(const Grid& grid, double rate, const char* who) {
  ScalarField theta = solve_logistic(grid, rate);
  if (theta.max_abs() == 0.0)
    throw precondition_error(std::string(who) + ": the fixed rate must exceed lambda_1");
  return theta;
}

}  // namespace

double threshold_a0(const Grid& grid, const ModelParams& p) {
  p.validate();
  const ScalarField theta_c = positive_logistic(grid, p.c, "threshold_a0");
  const ScalarField pot = pointwise(
      [&](double t) { return p.b * t / (1.0 + p.beta * t); }, theta_c);
  return principal_eigenpair(grid, pot).lambda;
}

double threshold_c0(const Grid& grid, const ModelParams& p) {
  p.validate();
  const ScalarField theta_a = positive_logistic(grid, p.a, "threshold_c0");
  const ScalarField pot = pointwise(
      [&](double t) { return p.d * t / (1.0 + p.alpha * t); }, theta_a);
  return principal_eigenpair(grid, pot).lambda;
}

BifurcationData bifurcation_data_a(const Grid& grid, const ModelParams& p) {
  p.validate();
  const ScalarField theta_c = positive_logistic(grid, p.c, "bifurcation_data_a");
  const int n = grid.num_nodes();

  const ScalarField pot = pointwise(
      [&](double t) { return p.b * t / (1.0 + p.beta * t); }, theta_c);
  const EigenPair pair = principal_eigenpair(grid, pot);
  const ScalarField& phi = pair.phi;

  // (-lap + 2 theta_c - c) is positive definite because the logistic state
  // makes lambda_1(theta_c - c) = 0 and the extra theta_c only raises it.
  Eigen::SparseMatrix<double> op = assemble_neg_laplacian(grid).matrix;
  for (int i = 0; i < n; ++i) op.coeffRef(i, i) += 2.0 * theta_c[i] - p.c;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(op);
  if (solver.info() != Eigen::Success)
    throw convergence_error("bifurcation_data_a: factorization failed");
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = -theta_c[i] / (1.0 + p.beta * theta_c[i]) * phi[i];
  ScalarField psi(grid, Eigen::VectorXd(p.d * solver.solve(rhs)));
  if (psi.max() >= 0.0)
    throw convergence_error("bifurcation_data_a: psi lost its negativity");

  double i_phi3 = 0.0, i_phi2psi = 0.0, i_theta_phi3 = 0.0, i_ind = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = 1.0 + p.beta * theta_c[i];
    const double phi3 = phi[i] * phi[i] * phi[i];
    i_phi3 += phi3;
    i_phi2psi += phi[i] * phi[i] * psi[i] / (s * s);
    i_theta_phi3 += theta_c[i] * phi3 / s;
    i_ind += phi3 * (1.0 - p.alpha * p.b * theta_c[i] / s);
  }
  const double w = grid.cell_measure();

  BifurcationData data;
  data.which = BranchKind::a_branch;
  data.threshold = pair.lambda;
  data.phi = phi;
  data.psi = std::move(psi);
  data.coeff1 = w * i_phi3 + p.b * w * i_phi2psi - p.b * p.alpha * w * i_theta_phi3;
  data.stability_indicator = w * i_ind;
  return data;
}

BifurcationData bifurcation_data_c(const Grid& grid, const ModelParams& p) {
  p.validate();
  const ScalarField theta_a = positive_logistic(grid, p.a, "bifurcation_data_c");
  const int n = grid.num_nodes();

  const ScalarField pot = pointwise(
      [&](double t) { return p.d * t / (1.0 + p.alpha * t); }, theta_a);
  const EigenPair pair = principal_eigenpair(grid, pot);
  const ScalarField& phi = pair.phi;

  Eigen::SparseMatrix<double> op = assemble_neg_laplacian(grid).matrix;
  for (int i = 0; i < n; ++i) op.coeffRef(i, i) += 2.0 * theta_a[i] - p.a;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(op);
  if (solver.info() != Eigen::Success)
    throw convergence_error("bifurcation_data_c: factorization failed");
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = -theta_a[i] / (1.0 + p.alpha * theta_a[i]) * phi[i];
  ScalarField psi(grid, Eigen::VectorXd(p.b * solver.solve(rhs)));
  if (psi.max() >= 0.0)
    throw convergence_error("bifurcation_data_c: psi lost its negativity");

  double i_phi3 = 0.0, i_phi2psi = 0.0, i_theta_phi3 = 0.0, i_ind = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = 1.0 + p.alpha * theta_a[i];
    const double phi3 = phi[i] * phi[i] * phi[i];
    i_phi3 += phi3;
    i_phi2psi += phi[i] * phi[i] * psi[i] / (s * s);
    i_theta_phi3 += theta_a[i] * phi3 / s;
    i_ind += phi3 * (1.0 - p.beta * p.d * theta_a[i] / s);
  }
  const double w = grid.cell_measure();

  BifurcationData data;
  data.which = BranchKind::c_branch;
  data.threshold = pair.lambda;
  data.phi = phi;
  data.psi = std::move(psi);
  data.coeff1 = w * i_phi3 + p.d * w * i_phi2psi - p.d * p.beta * w * i_theta_phi3;
  data.stability_indicator = w * i_ind;
  return data;
}

namespace {

struct RitzValue {
  std::complex<double> nu;  // eigenvalue of the inverted operator
  double residual = 0.0;
};

// One Arnoldi sweep of dimension m on x -> solve(J, x); returns Ritz values
// of the Hessenberg matrix with their residual bounds.
std::vector<RitzValue> arnoldi_ritz(const Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu,
                                    int dim, int m, bool& invariant) {
  Eigen::MatrixXd basis(dim, m + 1);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
  basis.col(0) = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(double(dim)));
  invariant = false;
  int built = 0;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd w = lu.solve(basis.col(j));
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const double hij = basis.col(i).dot(w);
        hess(i, j) += hij;
        w -= hij * basis.col(i);
      }
    }
    const double hnext = w.norm();
    built = j + 1;
    if (hnext < 1e-13) {
      invariant = true;
      break;
    }
    hess(j + 1, j) = hnext;
    basis.col(j + 1) = w / hnext;
  }

  const Eigen::MatrixXd h = hess.topLeftCorner(built, built);
  Eigen::EigenSolver<Eigen::MatrixXd> eig(h);
  if (eig.info() != Eigen::Success)
    throw convergence_error("Arnoldi Hessenberg eigendecomposition failed");

  const double hlast = invariant ? 0.0 : hess(built, built - 1);
  std::vector<RitzValue> out(built);
  for (int i = 0; i < built; ++i) {
    out[i].nu = eig.eigenvalues()[i];
    out[i].residual = hlast * std::abs(eig.eigenvectors().col(i)[built - 1]);
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> linearized_spectrum(const StateVector& state,
                                                      const ModelParams& p, int k) {
  p.validate();
  require_same_grid(state);
  if (k < 1) throw precondition_error("linearized_spectrum needs k >= 1");
  const int dim = 2 * state.u.grid().num_nodes();
  if (k > dim) throw precondition_error("linearized_spectrum: k exceeds the matrix dimension");

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(jacobian(state, p).matrix);
  if (lu.info() != Eigen::Success)
    throw convergence_error("linearized_spectrum: singular linearization at the state");

  // Converge a margin of smallest-modulus modes beyond k, so picking the k
  // smallest real parts among them is reliable.
  const int need = std::min(std::max(2 * k, 12), dim);
  int m = std::min(std::max(40, 4 * k), dim);
  for (;;) {
    bool invariant = false;
    std::vector<RitzValue> ritz = arnoldi_ritz(lu, dim, m, invariant);
    std::sort(ritz.begin(), ritz.end(),
              [](const RitzValue& a, const RitzValue& b) { return std::abs(a.nu) > std::abs(b.nu); });

    const int have = std::min<int>(need, static_cast<int>(ritz.size()));
    bool ok = static_cast<int>(ritz.size()) >= std::min(need, m);
    for (int i = 0; ok && i < have; ++i)
      ok = ritz[i].residual <= 1e-10 * std::max(1e-2, std::abs(ritz[i].nu));
    if (ok || invariant || m >= dim) {
      if (!ok && !invariant && m >= dim)
        throw convergence_error("linearized_spectrum: Arnoldi failed to converge");
      std::vector<std::complex<double>> mus;
      for (int i = 0; i < have; ++i) {
        if (std::abs(ritz[i].nu) < 1e-14) continue;
        mus.push_back(1.0 / ritz[i].nu);
      }
      std::sort(mus.begin(), mus.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
      });
      if (static_cast<int>(mus.size()) > k) mus.resize(k);
      if (static_cast<int>(mus.size()) < k)
        throw convergence_error("linearized_spectrum: fewer modes than requested");
      return mus;
    }
    m = std::min(dim, m * 2);
  }
}

Stability stability_from_spectrum(std::span<const std::complex<double>> mus) {
  bool all_positive = true;
  for (const auto& mu : mus) {
    if (mu.real() < -tol::stability) return Stability::unstable;
    if (mu.real() <= tol::stability) all_positive = false;
  }
  return all_positive ? Stability::stable : Stability::undetermined;
}

namespace {

// Newton corrector for the bordered system (state, param) with the
// projection constraint <proj component, phi> = s.
bool correct_branch_point(const Grid& grid, ModelParams p, BranchKind which,
                          const ScalarField& phi, double s_target, Eigen::VectorXd& z,
                          double& param, std::string& note) {
  const int n = grid.num_nodes();
  const int dim = 2 * n + 1;
  const Eigen::SparseMatrix<double> lap = assemble_neg_laplacian(grid).matrix;
  const double w = grid.cell_measure();
  const bool on_a = which == BranchKind::a_branch;

  auto set_param = [&](double value) {
    if (on_a) p.a = value; else p.c = value;
  };

  auto extended_residual = [&](const Eigen::VectorXd& zz, double pv, Eigen::VectorXd& out) {
    set_param(pv);
    out.resize(dim);
    const auto u = zz.head(n), v = zz.tail(n);
    out.head(n) = lap * u;
    out.segment(n, n) = lap * v;
    double proj = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = 1.0 / ((1.0 + p.alpha * u[i]) * (1.0 + p.beta * v[i]));
      out[i] -= u[i] * (p.a - u[i] - p.b * v[i] * f);
      out[n + i] -= v[i] * (p.c - v[i] - p.d * u[i] * f);
      proj += (on_a ? u[i] : v[i]) * phi[i];
    }
    out[2 * n] = w * proj - s_target;
  };

  Eigen::VectorXd f(dim), f_try(dim), z_try;
  double param_try = 0.0;
  extended_residual(z, param, f);
  double rn = f.cwiseAbs().maxCoeff();

  for (int it = 0; it < tol::max_newton_iter; ++it) {
    if (rn < tol::newton) return true;

    set_param(param);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * lap.nonZeros() + 7 * n + 1);
    for (int kk = 0; kk < lap.outerSize(); ++kk) {
      for (Eigen::SparseMatrix<double>::InnerIterator itr(lap, kk); itr; ++itr) {
        const int r = static_cast<int>(itr.row()), c = static_cast<int>(itr.col());
        trip.emplace_back(r, c, itr.value());
        trip.emplace_back(r + n, c + n, itr.value());
      }
    }
    for (int i = 0; i < n; ++i) {
      const double su = 1.0 + p.alpha * z[i];
      const double sv = 1.0 + p.beta * z[n + i];
      const double fr = 1.0 / (su * sv);
      trip.emplace_back(i, i, -p.a + 2.0 * z[i] + p.b * z[n + i] * fr / su);
      trip.emplace_back(i, i + n, p.b * z[i] * fr / sv);
      trip.emplace_back(i + n, i, p.d * z[n + i] * fr / su);
      trip.emplace_back(i + n, i + n, -p.c + 2.0 * z[n + i] + p.d * z[i] * fr / sv);
      // border column d(residual)/d(param) and border row d(constraint)/d(state)
      if (on_a) {
        trip.emplace_back(i, 2 * n, -z[i]);
        trip.emplace_back(2 * n, i, w * phi[i]);
      } else {
        trip.emplace_back(i + n, 2 * n, -z[n + i]);
        trip.emplace_back(2 * n, i + n, w * phi[i]);
      }
    }
    Eigen::SparseMatrix<double> jac(dim, dim);
    jac.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
    if (lu.info() != Eigen::Success) {
      note = "bordered Jacobian factorization failed";
      return false;
    }
    const Eigen::VectorXd delta = lu.solve(-f);
    if (!delta.allFinite()) {
      note = "corrector direction is not finite";
      return false;
    }

    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < tol::max_line_search; ++ls) {
      z_try = z + step * delta.head(2 * n);
      param_try = param + step * delta[2 * n];
      extended_residual(z_try, param_try, f_try);
      const double rn_try = f_try.cwiseAbs().maxCoeff();
      if (std::isfinite(rn_try) && rn_try <= (1.0 - 1e-4 * step) * rn) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      note = "corrector line search stalled";
      return false;
    }
    z = z_try;
    param = param_try;
    f = f_try;
    rn = f.cwiseAbs().maxCoeff();
  }
  note = "corrector iteration cap exceeded";
  return false;
}

}  // namespace

Branch continue_branch(const Grid& grid, const ModelParams& p, BranchKind which,
                       double s_max, int steps) {
  p.validate();
  if (!(s_max > 0.0 && s_max <= 0.5))
    throw precondition_error("continue_branch needs 0 < s_max <= 0.5");
  if (steps < 4) throw precondition_error("continue_branch needs steps >= 4");

  Branch branch;
  branch.which = which;
  branch.data =
      which == BranchKind::a_branch ? bifurcation_data_a(grid, p) : bifurcation_data_c(grid, p);

  const int n = grid.num_nodes();
  const bool on_a = which == BranchKind::a_branch;
  const ScalarField base =
      on_a ? solve_logistic(grid, p.c) : solve_logistic(grid, p.a);

  const double ds = s_max / steps;
  for (int k = 1; k <= steps; ++k) {
    const double s = k * ds;
    // Predictor straight from the first-order expansion.
    Eigen::VectorXd z(2 * n);
    if (on_a) {
      z.head(n) = s * branch.data.phi.values();
      z.tail(n) = base.values() + s * branch.data.psi.values();
    } else {
      z.head(n) = base.values() + s * branch.data.psi.values();
      z.tail(n) = s * branch.data.phi.values();
    }
    double param = branch.data.threshold + branch.data.coeff1 * s;

    std::string note;
    if (!correct_branch_point(grid, p, which, branch.data.phi, s, z, param, note)) {
      branch.complete = false;
      branch.diagnostic = "corrector failed at s = " + std::to_string(s) + ": " + note;
      return branch;
    }

    BranchPoint point;
    point.state = {ScalarField(grid, z.head(n)), ScalarField(grid, z.tail(n))};
    point.param_value = param;
    point.s = on_a ? inner(point.state.u, branch.data.phi)
                   : inner(point.state.v, branch.data.phi);

    ModelParams at = p;
    (on_a ? at.a : at.c) = param;
    const auto mus = linearized_spectrum(point.state, at, 6);
    point.leading_eig = mus.front();
    point.stable = stability_from_spectrum(mus) == Stability::stable;
    branch.points.push_back(std::move(point));
  }
  branch.complete = true;
  return branch;
}

}  // namespace bazykin
