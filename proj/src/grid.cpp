#include "bazykin/grid.hpp"

#include <cmath>
#include <vector>

namespace bazykin {

Grid Grid::interval(double length, int n) {
  if (!(length > 0.0) || n < 3)
    throw precondition_error("interval grid needs length > 0 and n >= 3");
  Grid g;
  g.kind_ = GridKind::interval;
  g.nx_ = n;
  g.ny_ = 1;
  g.lx_ = length;
  g.hx_ = length / (n + 1);
  return g;
}

Grid Grid::rectangle(double lx, double ly, int nx, int ny) {
  if (!(lx > 0.0) || !(ly > 0.0) || nx < 3 || ny < 3)
    throw precondition_error("rectangle grid needs positive sides and nx, ny >= 3");
  Grid g;
  g.kind_ = GridKind::rectangle;
  g.nx_ = nx;
  g.ny_ = ny;
  g.lx_ = lx;
  g.ly_ = ly;
  g.hx_ = lx / (nx + 1);
  g.hy_ = ly / (ny + 1);
  return g;
}

ScalarField::ScalarField(const Grid& grid, double fill)
    : grid_(grid), values_(Eigen::VectorXd::Constant(grid.num_nodes(), fill)) {
  if (!std::isfinite(fill)) throw precondition_error("field fill value must be finite");
}

ScalarField::ScalarField(const Grid& grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.num_nodes())
    throw precondition_error("field length does not match the grid's interior node count");
  if (!values_.allFinite()) throw precondition_error("field entries must be finite");
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw precondition_error("fields live on different grids");
}

LinearOperator assemble_neg_laplacian(const Grid& grid) {
  const int n = grid.num_nodes();
  std::vector<Eigen::Triplet<double>> trip;
  if (grid.kind() == GridKind::interval) {
    const double w = 1.0 / (grid.hx() * grid.hx());
    trip.reserve(3 * n);
    for (int i = 0; i < n; ++i) {
      trip.emplace_back(i, i, 2.0 * w);
      if (i > 0) trip.emplace_back(i, i - 1, -w);
      if (i + 1 < n) trip.emplace_back(i, i + 1, -w);
    }
  } else {
    const double wx = 1.0 / (grid.hx() * grid.hx());
    const double wy = 1.0 / (grid.hy() * grid.hy());
    const int nx = grid.nx(), ny = grid.ny();
    trip.reserve(5 * n);
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const int k = iy * nx + ix;
        trip.emplace_back(k, k, 2.0 * wx + 2.0 * wy);
        if (ix > 0) trip.emplace_back(k, k - 1, -wx);
        if (ix + 1 < nx) trip.emplace_back(k, k + 1, -wx);
        if (iy > 0) trip.emplace_back(k, k - nx, -wy);
        if (iy + 1 < ny) trip.emplace_back(k, k + nx, -wy);
      }
    }
  }
  LinearOperator op;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  op.symmetric = true;
  return op;
}

double integrate(const ScalarField& field) {
  // Fixed left-to-right summation keeps reruns byte-identical.
  double sum = 0.0;
  for (int i = 0; i < field.size(); ++i) sum += field[i];
  return field.grid().cell_measure() * sum;
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  double sum = 0.0;
  for (int i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return a.grid().cell_measure() * sum;
}

}  // namespace bazykin
