#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "bazykin/config.hpp"
#include "bazykin/output.hpp"
#include "bazykin/sweep.hpp"
#include "bazykin/verify.hpp"

using namespace bazykin;

namespace {

const char* kSampleConfig = R"(# sample configuration
[grid]
kind = interval
length = 3.141592653589793
n = 60

[params]
a = 5.0
b = 1.0
c = 4.0
d = 1.0
alpha = 0.2
beta = 0.2

[range_a]
min = 0.5
max = 6.0
count = 4

[range_c]
min = 0.5
max = 6.0
count = 4

[solver]
max_attempts = 8
seed = 7
workers = 1

[branch]
which = a
s_max = 0.02
steps = 4

[output]
dir = out
)";

}  // namespace

TEST_CASE("config round trip") {
  const Config cfg = parse_config(kSampleConfig);
  CHECK(cfg.grid.nx == 60);
  CHECK(cfg.params.a == 5.0);
  CHECK(cfg.params.alpha == 0.2);
  CHECK(cfg.range_a.count == 4);
  CHECK(cfg.seed == 7);
  CHECK(cfg.max_attempts == 8);
  CHECK(cfg.out_dir == "out");
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(parse_config("[grid]\nbogus = 3\n"), precondition_error);
  CHECK_THROWS_AS(parse_config("[params]\na = not_a_number\n"), precondition_error);
  CHECK_THROWS_AS(parse_config("a = 1\n"), precondition_error);  // key outside any section
  CHECK_THROWS_AS(parse_config("[range_a]\ncount = 1\n"), precondition_error);
  CHECK_THROWS_AS(parse_config("[grid]\nn = 2\n"), precondition_error);
}

TEST_CASE("float formatting round trips") {
  for (const double x : {0.0, 1.0, -1.5, 3.141592653589793, 1e-12, 8.000000000000002}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
    CHECK(s.find(',') == std::string::npos);
  }
}

TEST_CASE("sweep output is deterministic and worker-count independent") {
  Config cfg = parse_config(kSampleConfig);
  const SweepResult first = run_sweep(cfg);
  const SweepResult second = run_sweep(cfg);
  CHECK(sweep_csv(first) == sweep_csv(second));

  cfg.workers = 2;
  const SweepResult parallel = run_sweep(cfg);
  CHECK(sweep_csv(first) == sweep_csv(parallel));
}

TEST_CASE("sweep rows parse back into the declared schema") {
  const Config cfg = parse_config(kSampleConfig);
  const SweepResult result = run_sweep(cfg);
  const std::string csv = sweep_csv(result);

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "a,c,n_coexistence,a0,c0,label,failed_attempts");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(row, tok, ',')) cols.push_back(tok);
    while (cols.size() < 7) cols.push_back("");  // trailing empty optional
    REQUIRE(cols.size() == 7);
    const RegionCell& cell = result.cells[rows];
    CHECK(std::stod(cols[0]) == cell.a);
    CHECK(std::stod(cols[1]) == cell.c);
    CHECK(std::stoi(cols[2]) == cell.n_coexistence);
    if (cell.a0) CHECK(std::stod(cols[3]) == *cell.a0);
    else CHECK(cols[3].empty());
    if (cell.c0) CHECK(std::stod(cols[4]) == *cell.c0);
    else CHECK(cols[4].empty());
    CHECK((cols[5] == "none" || cols[5] == "one+" || cols[5] == "two+"));
    CHECK(std::stoi(cols[6]) == cell.failed_attempts);
    ++rows;
  }
  CHECK(rows == result.cells.size());
}

TEST_CASE("sweep classification is consistent with the thresholds") {
  const Config cfg = parse_config(kSampleConfig);
  const SweepResult result = run_sweep(cfg);
  for (const auto& cell : result.cells) {
    if (cell.a <= result.lambda1 + 1e-6 || cell.c <= result.lambda1 + 1e-6)
      CHECK(cell.n_coexistence == 0);
    CHECK(cell.label == (cell.n_coexistence >= 2   ? "two+"
                         : cell.n_coexistence == 1 ? "one+"
                                                   : "none"));
  }
}

TEST_CASE("threshold curves: limits and monotonicity") {
  Config cfg = parse_config(kSampleConfig);
  cfg.params.alpha = 0.0;
  cfg.params.beta = 0.0;
  const ThresholdCurves curves = run_thresholds(cfg);

  // b = d = 1, alpha = beta = 0: both curves coincide with the diagonal, the
  // degenerate form of the crossing of the two bifurcation lines.
  double prev = 0.0;
  bool first = true;
  for (const auto& [c, a0] : curves.a0_of_c) {
    if (!a0) continue;
    CHECK(std::abs(*a0 - c) < 5e-6);
    if (!first) CHECK(*a0 >= prev);
    prev = *a0;
    first = false;
  }
  for (std::size_t i = 0; i < curves.a0_of_c.size(); ++i) {
    if (!curves.a0_of_c[i].second) continue;
    if (curves.c0_of_a[i].second)
      CHECK(std::abs(*curves.a0_of_c[i].second - *curves.c0_of_a[i].second) < 1e-12);
  }
}

TEST_CASE("b, d -> 0 collapses both curves to lambda_1") {
  Config cfg = parse_config(kSampleConfig);
  cfg.params.b = 1e-12;
  cfg.params.d = 1e-12;
  const ThresholdCurves curves = run_thresholds(cfg);
  for (const auto& [c, a0] : curves.a0_of_c)
    if (a0) CHECK(std::abs(*a0 - curves.lambda1) < 1e-8);
  for (const auto& [a, c0] : curves.c0_of_a)
    if (c0) CHECK(std::abs(*c0 - curves.lambda1) < 1e-8);
}

TEST_CASE("per-cell seeds differ across cells but not across runs") {
  CHECK(cell_seed(42, 0) != cell_seed(42, 1));
  CHECK(cell_seed(42, 3) == cell_seed(42, 3));
  CHECK(cell_seed(42, 3) != cell_seed(43, 3));
}

#ifdef BAZYKIN_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BAZYKIN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli exit codes") {
  const std::string dir = "cli_test_out";
  std::ofstream("cli_test.cfg") << kSampleConfig;

  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("bogus-subcommand") == 2);
  CHECK(run_cli("verify --config cli_test.cfg --theorem 9.9 --out " + dir) == 2);
  CHECK(run_cli("verify --config missing.cfg --theorem 2.3 --out " + dir) == 2);
  CHECK(run_cli("thresholds --config cli_test.cfg --out " + dir) == 0);

  // eps outside its precondition: config error, exit 2.
  std::ofstream("cli_test_bad_eps.cfg") << kSampleConfig << "\n[verify]\neps = 4.5\n";
  CHECK(run_cli("verify --config cli_test_bad_eps.cfg --theorem 5.1 --out " + dir) == 2);
}
#endif
