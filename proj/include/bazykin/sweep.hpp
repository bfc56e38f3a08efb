#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bazykin/config.hpp"
#include "bazykin/steady.hpp"

namespace bazykin {

struct RegionCell {
  double a = 0.0;
  double c = 0.0;
  int n_coexistence = 0;
  std::optional<double> a0;   // empty when c <= lambda_1
  std::optional<double> c0;   // empty when a <= lambda_1
  std::string label;          // none | one+ | two+
  int failed_attempts = 0;    // solver failures stay in-row, never abort the sweep
};

struct SweepResult {
  double lambda1 = 0.0;
  std::vector<RegionCell> cells;  // row-major over (a index, c index)
};

/// Classifies every (a, c) cell of the configured ranges by running the
/// deflated multi-solve with a per-cell seed derived from (config seed, cell
/// index). Cells are independent; `workers` threads share the cell list and
/// the output order never depends on scheduling.
SweepResult run_sweep(const Config& config);

struct ThresholdCurves {
  double lambda1 = 0.0;
  std::vector<std::pair<double, std::optional<double>>> a0_of_c;
  std::vector<std::pair<double, std::optional<double>>> c0_of_a;
};

ThresholdCurves run_thresholds(const Config& config);

std::string sweep_csv(const SweepResult& result);
std::string a0_curve_csv(const ThresholdCurves& curves);
std::string c0_curve_csv(const ThresholdCurves& curves);

/// Per-cell RNG seed: a fixed mix of the global seed and the cell index.
std::uint64_t cell_seed(std::uint64_t global_seed, int cell_index);

}  // namespace bazykin
