#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "bazykin/model.hpp"

namespace bazykin {

enum class BranchKind { a_branch, c_branch };

/// Everything local to one bifurcation from a semi-trivial state.
/// For the a-branch (off the state (0, theta_c)):
///   threshold = lambda_1(b theta_c / (1 + beta theta_c)),
///   phi       = its positive eigenfunction, quadrature-normalized,
///   psi       = d (-lap + 2 theta_c - c)^{-1} (-theta_c/(1+beta theta_c) phi) < 0,
///   coeff1    = int phi^3 + b int phi^2 psi/(1+beta theta_c)^2
///               - b alpha int theta_c phi^3/(1+beta theta_c),
///   stability_indicator = int phi^3 (1 - alpha b theta_c/(1+beta theta_c)).
/// The c-branch mirrors this under the species swap.
struct BifurcationData {
  BranchKind which = BranchKind::a_branch;
  double threshold = 0.0;
  ScalarField phi;
  ScalarField psi;
  double coeff1 = 0.0;
  double stability_indicator = 0.0;
};

double threshold_a0(const Grid& grid, const ModelParams& p);
double threshold_c0(const Grid& grid, const ModelParams& p);

BifurcationData bifurcation_data_a(const Grid& grid, const ModelParams& p);
BifurcationData bifurcation_data_c(const Grid& grid, const ModelParams& p);

/// k eigenvalues of the linearization at a state with smallest real part,
/// via shift-invert Arnoldi around 0. Sorted by ascending real part.
std::vector<std::complex<double>> linearized_spectrum(const StateVector& state,
                                                      const ModelParams& p, int k);

/// stable iff every real part exceeds tol::stability, unstable iff some real
/// part is below -tol::stability, undetermined otherwise.
Stability stability_from_spectrum(std::span<const std::complex<double>> mus);

struct BranchPoint {
  double s = 0.0;            // projection coordinate of the state onto phi
  double param_value = 0.0;  // a(s) or c(s)
  StateVector state;
  std::complex<double> leading_eig;
  bool stable = false;
};

struct Branch {
  BranchKind which = BranchKind::a_branch;
  BifurcationData data;
  std::vector<BranchPoint> points;
  bool complete = false;
  std::string diagnostic;
};

/// Continuation of the bifurcating solution branch at uniform steps of the
/// projection coordinate s up to s_max (at most 0.5), with the first-order
/// expansion as predictor and a bordered Newton corrector in (state, param).
/// A corrector failure returns the branch truncated, with a diagnostic.
Branch continue_branch(const Grid& grid, const ModelParams& p, BranchKind which,
                       double s_max, int steps);

}  // namespace bazykin
