#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bazykin/config.hpp"
#include "bazykin/sweep.hpp"

namespace bazykin {

struct CheckItem {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  std::string cmp;  // "<=", ">=", "==", "!="
  bool passed = false;
};

struct CheckReport {
  std::string id;
  std::string title;
  bool passed = false;
  std::vector<CheckItem> items;
};

/// Recipe ids accepted by the verify command.
std::vector<std::string> known_check_ids();

/// Runs one check recipe. The parameter panels and tolerances are fixed in
/// code; the config supplies grid resolution, seed, workers and the deflation
/// budget (and eps for check 5.1). Unknown ids throw precondition_error.
CheckReport run_check(const Config& config, std::string_view id);

std::string report_json(const CheckReport& report);

// Deterministic building blocks shared with the acceptance suite.

/// The region sweep of check 4.2: a, c in [0.5, 8]^2 over 15 x 15 cells with
/// b = d = 1, alpha = beta = 0.2.
SweepResult region_sweep(const Config& config);
CheckReport region_assertions(const SweepResult& sweep);

/// The multiplicity panel of checks 5.2/5.3: a = 2.5, c = 5, b = d = 1,
/// beta = 0, alpha = 1e4, stability filled in from the linearized spectra.
std::vector<SolutionRecord> multiplicity_records(const Config& config);

/// CSV summary of solution records (one row per record).
std::string records_csv(const std::vector<SolutionRecord>& records);

}  // namespace bazykin
