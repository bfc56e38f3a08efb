#include "bazykin/eigen.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bazykin/constants.hpp"

namespace bazykin {

EigenPair principal_eigenpair(const Grid& grid, const ScalarField& q) {
  if (!(q.grid() == grid)) throw precondition_error("potential lives on a different grid");
  const int n = grid.num_nodes();

  Eigen::SparseMatrix<double> a = assemble_neg_laplacian(grid).matrix;
  for (int i = 0; i < n; ++i) a.coeffRef(i, i) += q[i];
  a.makeCompressed();

  // Shift to a positive definite operator so the Cholesky factorization and
  // the inverse iteration are both well posed.
  const double sigma = std::max(0.0, -q.min()) + 1.0;
  Eigen::SparseMatrix<double> shifted = a;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) += sigma;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(shifted);
  if (solver.info() != Eigen::Success)
    throw convergence_error("factorization of the shifted eigenproblem operator failed");

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0);
  x.normalize();

  // Converge the Rayleigh quotient to rayleigh_diff, then keep iterating
  // until the residual itself sits an order below the eigenpair contract.
  const double residual_target_scale = 0.1 * tol::eig_residual;
  double lambda = x.dot(a * x);
  std::vector<double> history;
  bool done = false;
  Eigen::VectorXd rhs;
  for (int it = 0; it < tol::max_power_iter; ++it) {
    rhs = x;  // solve() must not alias its destination
    x = solver.solve(rhs);
    x.normalize();
    const Eigen::VectorXd ax = a * x;
    const double lambda_next = x.dot(ax);
    const double residual = (ax - lambda_next * x).cwiseAbs().maxCoeff();
    history.push_back(residual);
    const bool rq_settled = std::abs(lambda_next - lambda) < tol::rayleigh_diff;
    lambda = lambda_next;
    if (rq_settled && residual <= residual_target_scale * std::max(1.0, std::abs(lambda))) {
      done = true;
      break;
    }
  }
  if (!done)
    throw convergence_error("inverse power iteration exceeded its iteration cap",
                            std::move(history));

  // One-signed principal mode: orient by the max-magnitude entry, then demand
  // strict positivity everywhere.
  int imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  if (x[imax] < 0.0) x = -x;
  if (x.minCoeff() <= 0.0)
    throw convergence_error("principal eigenfunction failed the positivity check");

  x /= std::sqrt(grid.cell_measure() * x.squaredNorm());
  return {lambda, ScalarField(grid, std::move(x))};
}

double radius_shift(const ScalarField& q, double lambda1_estimate) {
  return q.max() + std::max(1.0, std::abs(lambda1_estimate));
}

double spectral_radius_indicator(const Grid& grid, const ScalarField& q, double M) {
  if (!(q.grid() == grid)) throw precondition_error("potential lives on a different grid");
  if (!(M >= q.max() + 1.0))
    throw precondition_error("spectral radius shift must satisfy M >= max q + 1");
  const int n = grid.num_nodes();

  // r is the largest eigenvalue of the generalized symmetric pencil
  // (M - q) x = r (M - lap) x, so the power iteration x <- S^{-1} D x admits
  // a Rayleigh-quotient estimate r = <x, Dx> / <x, Sx>.
  Eigen::SparseMatrix<double> s = assemble_neg_laplacian(grid).matrix;
  for (int i = 0; i < n; ++i) s.coeffRef(i, i) += M;
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = M - q[i];

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(s);
  if (solver.info() != Eigen::Success)
    throw convergence_error("factorization of the spectral radius operator failed");

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0);
  x.normalize();
  double r = 0.0;
  Eigen::VectorXd rhs;
  for (int it = 0; it < tol::max_power_iter; ++it) {
    rhs = d.cwiseProduct(x);  // solve() must not alias its destination
    x = solver.solve(rhs);
    x.normalize();
    const double r_next = x.dot(d.cwiseProduct(x)) / x.dot(s * x);
    if (std::abs(r_next - r) < tol::radius_diff) return r_next;
    r = r_next;
  }
  throw convergence_error("spectral radius power iteration exceeded its iteration cap");
}

}  // namespace bazykin
