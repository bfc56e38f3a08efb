#include "bazykin/sweep.hpp"

#include <atomic>
#include <thread>

#include "bazykin/eigen.hpp"
#include "bazykin/output.hpp"

namespace bazykin {

std::uint64_t cell_seed(std::uint64_t global_seed, int cell_index) {
  std::uint64_t x = global_seed ^ (0x9e3779b97f4a7c15ull * (cell_index + 1));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

std::string cell_label(int n_coexistence) {
  if (n_coexistence >= 2) return "two+";
  if (n_coexistence == 1) return "one+";
  return "none";
}

RegionCell run_cell(const Grid& grid, const Config& config, double lambda1, double a, double c,
                    int cell_index) {
  ModelParams p = config.params;
  p.a = a;
  p.c = c;

  RegionCell cell;
  cell.a = a;
  cell.c = c;
  try {
    if (c > lambda1 + 1e-8) cell.a0 = threshold_a0(grid, p);
    if (a > lambda1 + 1e-8) cell.c0 = threshold_c0(grid, p);

    const auto seeds = default_seeds(grid, p, cell_seed(config.seed, cell_index));
    DeflationOptions options;
    options.max_attempts = config.max_attempts;
    const auto records = deflated_solve(p, seeds, options);
    for (const auto& rec : records)
      if (rec.classification == Classification::coexistence) ++cell.n_coexistence;
  } catch (const std::exception&) {
    ++cell.failed_attempts;
  }
  cell.label = cell_label(cell.n_coexistence);
  return cell;
}

}  // namespace

SweepResult run_sweep(const Config& config) {
  config.validate();
  const Grid grid = config.grid.make();

  SweepResult result;
  result.lambda1 = principal_eigenpair(grid, ScalarField(grid)).lambda;

  const int na = config.range_a.count, nc = config.range_c.count;
  result.cells.resize(static_cast<std::size_t>(na) * nc);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= na * nc) return;
      const double a = config.range_a.at(idx / nc);
      const double c = config.range_c.at(idx % nc);
      result.cells[idx] = run_cell(grid, config, result.lambda1, a, c, idx);
    }
  };

  const int nthreads = std::min(config.workers, na * nc);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return result;
}

ThresholdCurves run_thresholds(const Config& config) {
  config.validate();
  const Grid grid = config.grid.make();

  ThresholdCurves curves;
  curves.lambda1 = principal_eigenpair(grid, ScalarField(grid)).lambda;

  for (int i = 0; i < config.range_c.count; ++i) {
    const double c = config.range_c.at(i);
    std::optional<double> a0;
    if (c > curves.lambda1 + 1e-8) {
      ModelParams p = config.params;
      p.c = c;
      a0 = threshold_a0(grid, p);
    }
    curves.a0_of_c.emplace_back(c, a0);
  }
  for (int i = 0; i < config.range_a.count; ++i) {
    const double a = config.range_a.at(i);
    std::optional<double> c0;
    if (a > curves.lambda1 + 1e-8) {
      ModelParams p = config.params;
      p.a = a;
      c0 = threshold_c0(grid, p);
    }
    curves.c0_of_a.emplace_back(a, c0);
  }
  return curves;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "a,c,n_coexistence,a0,c0,label,failed_attempts\n";
  for (const auto& cell : result.cells) {
    out += format_double(cell.a);
    out += ',';
    out += format_double(cell.c);
    out += ',';
    out += std::to_string(cell.n_coexistence);
    out += ',';
    out += format_optional(cell.a0);
    out += ',';
    out += format_optional(cell.c0);
    out += ',';
    out += cell.label;
    out += ',';
    out += std::to_string(cell.failed_attempts);
    out += '\n';
  }
  return out;
}

std::string a0_curve_csv(const ThresholdCurves& curves) {
  std::string out = "c,a0\n";
  for (const auto& [c, a0] : curves.a0_of_c) {
    out += format_double(c);
    out += ',';
    out += format_optional(a0);
    out += '\n';
  }
  return out;
}

std::string c0_curve_csv(const ThresholdCurves& curves) {
  std::string out = "a,c0\n";
  for (const auto& [a, c0] : curves.c0_of_a) {
    out += format_double(a);
    out += ',';
    out += format_optional(c0);
    out += '\n';
  }
  return out;
}

}  // namespace bazykin
