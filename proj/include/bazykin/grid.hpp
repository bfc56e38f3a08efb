#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "bazykin/errors.hpp"

namespace bazykin {

enum class GridKind { interval, rectangle };

/// Uniform Dirichlet grid over an interval (0, L) or a rectangle
/// (0, Lx) x (0, Ly). Only interior nodes are unknowns; boundary values are
/// identically zero and never stored. Spacing is h = L/(n+1) per axis.
class Grid {
 public:
  Grid() = default;

  static Grid interval(double length, int n);
  static Grid rectangle(double lx, double ly, int nx, int ny);

  GridKind kind() const { return kind_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int num_nodes() const { return nx_ * ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }

  /// Quadrature weight of one interior node (h in 1D, hx*hy in 2D).
  double cell_measure() const { return kind_ == GridKind::interval ? hx_ : hx_ * hy_; }

  double x(int node) const { return hx_ * (node % nx_ + 1); }
  double y(int node) const { return hy_ * (node / nx_ + 1); }

  bool operator==(const Grid&) const = default;

 private:
  GridKind kind_ = GridKind::interval;
  int nx_ = 0, ny_ = 1;
  double lx_ = 0.0, ly_ = 0.0;
  double hx_ = 0.0, hy_ = 0.0;
};

/// Nodal values of one scalar quantity on the interior nodes of a grid.
/// Entries are finite on construction.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, Eigen::VectorXd values);

  const Grid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }

  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  double min() const { return values_.minCoeff(); }
  double max() const { return values_.maxCoeff(); }
  double max_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  Grid grid_;
  Eigen::VectorXd values_;
};

/// Sparse operator over the interior nodes.
struct LinearOperator {
  Eigen::SparseMatrix<double> matrix;
  bool symmetric = false;
};

/// Second-order central-difference discretization of -Laplace with the
/// boundary rows eliminated. Symmetric positive definite.
LinearOperator assemble_neg_laplacian(const Grid& grid);

/// Trapezoid quadrature of the field over the domain, using the implicit
/// zero boundary values: cell_measure * sum of nodal values.
double integrate(const ScalarField& field);

/// Quadrature inner product <a, b> = integrate(a*b).
double inner(const ScalarField& a, const ScalarField& b);

void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Nodewise application of fn across one or more fields on a shared grid.
template <class Fn, class... Rest>
ScalarField pointwise(Fn&& fn, const ScalarField& first, const Rest&... rest) {
  (require_same_grid(first, rest), ...);
  Eigen::VectorXd out(first.size());
  for (int i = 0; i < first.size(); ++i) out[i] = fn(first[i], rest[i]...);
  return {first.grid(), std::move(out)};
}

}  // namespace bazykin
