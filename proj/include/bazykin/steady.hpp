#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bazykin/model.hpp"

namespace bazykin {

/// Unique positive solution of -lap w = w (rate - w) with zero boundary data,
/// or the zero field when rate does not exceed the principal eigenvalue of
/// -lap. Satisfies 0 < w <= rate nodewise in the positive case.
ScalarField solve_logistic(const Grid& grid, double rate);

/// Damped Newton on the steady-state residual from a given initial guess.
/// Negative nodes of the initial guess are clipped to zero; iterates are not.
/// Converges to ||residual||_inf < tol::newton or throws convergence_error.
SolutionRecord newton_solve(const StateVector& initial, const ModelParams& p);

struct DeflationOptions {
  int max_attempts = 12;
};

/// Search seeds: (theta_a, theta_c), (theta_a/2, theta_c/2), two
/// saturation-layer seeds next to the semi-trivial states (small species at
/// the scale where alpha u, resp. beta v, is order one), and eight
/// reproducible random multiples (r_u theta_a, r_v theta_c) with log-uniform
/// scale factors, alternately biased so one species stays near full strength.
std::vector<StateVector> default_seeds(const Grid& grid, const ModelParams& p,
                                       std::uint64_t seed);

/// Finds multiple solutions by repeated Newton runs on the residual scaled by
/// the deflation factor prod_k (1/||U - U_k||^2 + 1) over everything found so
/// far. The trivial and the admissible semi-trivial states are seeded into
/// the deflation set automatically and included in the returned records.
/// Distinct means a nodewise max difference above tol::distinct.
std::vector<SolutionRecord> deflated_solve(const ModelParams& p,
                                           const std::vector<StateVector>& seeds,
                                           const DeflationOptions& options = {});

/// A priori bounds: u <= a and v <= c (within 1e-8) and u <= theta_a,
/// v <= theta_c (within 1e-6), all nodewise.
bool check_apriori(const SolutionRecord& record);

struct InequalityCheck {
  double max_violation = 0.0;          // over all interior nodes
  int violating_nodes = 0;
  double max_violation_compact = 0.0;  // over the compact subset
  int violating_nodes_compact = 0;
};

/// Residuals of the four ordered-bracket inequalities for the candidate pair
/// upper = (theta_a, theta_c), lower = (theta_{a-eps}, theta_{c-eps}).
/// Checks 0 and 1 must be <= 0 (upper solution), checks 2 and 3 must be >= 0
/// (lower solution). The compact subset keeps the nodes where the respective
/// lower component exceeds 10% of its maximum.
struct SubSuperReport {
  double eps = 0.0;
  std::array<InequalityCheck, 4> inequality;

  bool upper_holds(double slack = 1e-8) const {
    return inequality[0].max_violation <= slack && inequality[1].max_violation <= slack;
  }
  bool lower_holds_on_compact(double slack = 1e-8) const {
    return inequality[2].max_violation_compact <= slack &&
           inequality[3].max_violation_compact <= slack;
  }
};

SubSuperReport verify_sub_super(const Grid& grid, const ModelParams& p, double eps);

}  // namespace bazykin
