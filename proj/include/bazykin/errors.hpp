#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bazykin {

/// Violated input contract (bad parameter range, grid mismatch, malformed config).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver ran out of budget or hit a degenerate point.
/// `history` holds the residual norm of each iterate up to the failure.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, std::vector<double> residual_history = {})
      : std::runtime_error(what), history(std::move(residual_history)) {}

  std::vector<double> history;

  double last_residual() const { return history.empty() ? -1.0 : history.back(); }
};

}  // namespace bazykin
