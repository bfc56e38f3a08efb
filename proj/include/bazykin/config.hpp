#pragma once

#include <cstdint>
#include <string>

#include "bazykin/bifurcation.hpp"
#include "bazykin/model.hpp"

namespace bazykin {

struct GridSpec {
  GridKind kind = GridKind::interval;
  double lx = 3.14159265358979323846;
  double ly = 3.14159265358979323846;
  int nx = 200;
  int ny = 32;

  Grid make() const {
    return kind == GridKind::interval ? Grid::interval(lx, nx)
                                      : Grid::rectangle(lx, ly, nx, ny);
  }
};

struct RangeSpec {
  double min = 0.5;
  double max = 8.0;
  int count = 15;

  double at(int i) const { return min + (max - min) * i / (count - 1); }
  void validate(const char* name) const;
};

/// One flat key = value file with [grid], [params], [range_a], [range_c],
/// [solver], [branch], [verify] and [output] sections; see the README for
/// the full schema. Unknown sections or keys are rejected.
struct Config {
  GridSpec grid;
  ModelParams params{5.0, 1.0, 5.0, 1.0, 0.0, 0.0};
  RangeSpec range_a;
  RangeSpec range_c;

  int max_attempts = 12;   // deflation budget per parameter cell
  std::uint64_t seed = 42;
  int workers = 1;

  BranchKind branch_which = BranchKind::a_branch;
  double branch_s_max = 0.02;
  int branch_steps = 4;

  double verify_eps = 0.5;

  std::string out_dir = "out";

  void validate() const;
};

Config load_config(const std::string& path);
Config parse_config(const std::string& text);

}  // namespace bazykin
