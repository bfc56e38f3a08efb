#include "bazykin/model.hpp"

#include <vector>

namespace bazykin {

void ModelParams::validate() const {
  if (!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0))
    throw precondition_error("model parameters a, b, c, d must be strictly positive");
  if (!(alpha >= 0.0 && beta >= 0.0))
    throw precondition_error("saturation constants alpha, beta must be non-negative");
}

double bazykin_response(double u, double v, const ModelParams& p) {
  if (u < 0.0 || v < 0.0) throw precondition_error("bazykin_response needs u, v >= 0");
  return 1.0 / ((1.0 + p.alpha * u) * (1.0 + p.beta * v));
}

void require_same_grid(const StateVector& s) { require_same_grid(s.u, s.v); }

namespace {

// Raw residual on preassembled operators; shared by the solvers.
void residual_raw(const Eigen::SparseMatrix<double>& lap, const Eigen::VectorXd& u,
                  const Eigen::VectorXd& v, const ModelParams& p, Eigen::VectorXd& ru,
                  Eigen::VectorXd& rv) {
  const int n = static_cast<int>(u.size());
  ru = lap * u;
  rv = lap * v;
  for (int i = 0; i < n; ++i) {
    const double f = 1.0 / ((1.0 + p.alpha * u[i]) * (1.0 + p.beta * v[i]));
    ru[i] -= u[i] * (p.a - u[i] - p.b * v[i] * f);
    rv[i] -= v[i] * (p.c - v[i] - p.d * u[i] * f);
  }
}

}  // namespace

StateVector residual(const StateVector& state, const ModelParams& p) {
  require_same_grid(state);
  const Grid& g = state.u.grid();
  const Eigen::SparseMatrix<double> lap = assemble_neg_laplacian(g).matrix;
  Eigen::VectorXd ru, rv;
  residual_raw(lap, state.u.values(), state.v.values(), p, ru, rv);
  return {ScalarField(g, std::move(ru)), ScalarField(g, std::move(rv))};
}

double residual_norm_inf(const StateVector& state, const ModelParams& p) {
  const StateVector r = residual(state, p);
  return std::max(r.u.max_abs(), r.v.max_abs());
}

LinearOperator jacobian(const StateVector& state, const ModelParams& p) {
  require_same_grid(state);
  const Grid& g = state.u.grid();
  const int n = g.num_nodes();
  const Eigen::SparseMatrix<double> lap = assemble_neg_laplacian(g).matrix;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * lap.nonZeros() + 2 * n);
  for (int k = 0; k < lap.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(lap, k); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      trip.emplace_back(static_cast<int>(it.row()) + n, static_cast<int>(it.col()) + n,
                        it.value());
    }
  }
  const Eigen::VectorXd& u = state.u.values();
  const Eigen::VectorXd& v = state.v.values();
  for (int i = 0; i < n; ++i) {
    const double su = 1.0 + p.alpha * u[i];
    const double sv = 1.0 + p.beta * v[i];
    const double f = 1.0 / (su * sv);
    trip.emplace_back(i, i, -p.a + 2.0 * u[i] + p.b * v[i] * f / su);
    trip.emplace_back(i, i + n, p.b * u[i] * f / sv);
    trip.emplace_back(i + n, i, p.d * v[i] * f / su);
    trip.emplace_back(i + n, i + n, -p.c + 2.0 * v[i] + p.d * u[i] * f / sv);
  }

  LinearOperator op;
  op.matrix.resize(2 * n, 2 * n);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  op.symmetric = false;
  return op;
}

double pos_tol(const ScalarField& w) { return 1e-6 * std::max(1.0, w.max()); }

namespace {

bool component_positive(const ScalarField& w) { return w.min() > pos_tol(w); }
bool component_zero(const ScalarField& w) { return w.max_abs() <= 1e-6; }

}  // namespace

Classification classify(const StateVector& state) {
  const bool up = component_positive(state.u), uz = component_zero(state.u);
  const bool vp = component_positive(state.v), vz = component_zero(state.v);
  if (uz && vz) return Classification::trivial;
  if (up && vz) return Classification::semi_trivial_u;
  if (uz && vp) return Classification::semi_trivial_v;
  if (up && vp) return Classification::coexistence;
  return Classification::indefinite;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::trivial: return "trivial";
    case Classification::semi_trivial_u: return "semi-trivial-u";
    case Classification::semi_trivial_v: return "semi-trivial-v";
    case Classification::coexistence: return "coexistence";
    case Classification::indefinite: return "indefinite";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::undetermined: return "undetermined";
  }
  return "?";
}

}  // namespace bazykin
