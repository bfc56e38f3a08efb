// Command-line front end: parameter-plane sweeps, threshold curves, branch
// continuation, theorem checks and one-off solves, all driven by a config
// file. Exit codes: 0 success, 1 check failure, 2 usage or config error.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bazykin/config.hpp"
#include "bazykin/output.hpp"
#include "bazykin/sweep.hpp"
#include "bazykin/verify.hpp"

namespace {

using namespace bazykin;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file")->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "random seed (overrides config)")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--workers", args.workers, "worker threads (overrides config)");
}

Config make_config(const CommonArgs& args) {
  Config cfg = load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed_set) cfg.seed = args.seed;
  if (args.workers > 0) cfg.workers = args.workers;
  cfg.validate();
  return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int cmd_thresholds(const CommonArgs& args) {
  const Config cfg = make_config(args);
  const ThresholdCurves curves = run_thresholds(cfg);
  write_text_file(join(cfg.out_dir, "a0_curve.csv"), a0_curve_csv(curves));
  write_text_file(join(cfg.out_dir, "c0_curve.csv"), c0_curve_csv(curves));
  std::cout << "thresholds: wrote a0_curve.csv, c0_curve.csv (lambda_1 = "
            << format_double(curves.lambda1) << ")\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const Config cfg = make_config(args);
  const SweepResult result = run_sweep(cfg);
  write_text_file(join(cfg.out_dir, "sweep.csv"), sweep_csv(result));
  int coexisting = 0;
  for (const auto& cell : result.cells)
    if (cell.n_coexistence > 0) ++coexisting;
  std::cout << "sweep: " << result.cells.size() << " cells, " << coexisting
            << " with coexistence; wrote sweep.csv\n";
  return 0;
}

int cmd_branch(const CommonArgs& args, const std::string& which_flag) {
  Config cfg = make_config(args);
  if (which_flag == "a") cfg.branch_which = BranchKind::a_branch;
  else if (which_flag == "c") cfg.branch_which = BranchKind::c_branch;
  else if (!which_flag.empty()) throw precondition_error("--which must be a or c");

  const Grid grid = cfg.grid.make();
  const Branch branch =
      continue_branch(grid, cfg.params, cfg.branch_which, cfg.branch_s_max, cfg.branch_steps);

  std::string csv = "s,param_value,min_u,max_u,min_v,max_v,re_mu_lead,im_mu_lead,stable\n";
  for (const auto& pt : branch.points) {
    csv += format_double(pt.s);
    csv += ',';
    csv += format_double(pt.param_value);
    csv += ',';
    csv += format_double(pt.state.u.min());
    csv += ',';
    csv += format_double(pt.state.u.max());
    csv += ',';
    csv += format_double(pt.state.v.min());
    csv += ',';
    csv += format_double(pt.state.v.max());
    csv += ',';
    csv += format_double(pt.leading_eig.real());
    csv += ',';
    csv += format_double(pt.leading_eig.imag());
    csv += ',';
    csv += pt.stable ? "1" : "0";
    csv += '\n';
  }
  const bool on_a = branch.which == BranchKind::a_branch;
  const std::string stem = on_a ? "branch_a" : "branch_c";
  write_text_file(join(cfg.out_dir, stem + ".csv"), csv);

  nlohmann::json summary;
  summary["which"] = on_a ? "a" : "c";
  summary["threshold"] = branch.data.threshold;
  summary["coeff1_quadrature"] = branch.data.coeff1;
  summary["stability_indicator"] = branch.data.stability_indicator;
  summary["complete"] = branch.complete;
  if (!branch.diagnostic.empty()) summary["diagnostic"] = branch.diagnostic;
  if (branch.points.size() >= 2) {
    // Secant estimate of the parameter slope from the two smallest s values.
    const auto& p0 = branch.points[0];
    const auto& p1 = branch.points[1];
    summary["coeff1_slope_estimate"] =
        2.0 * (p0.param_value - branch.data.threshold) / p0.s -
        (p1.param_value - branch.data.threshold) / p1.s;
  }
  summary["stable_points"] = [&] {
    int k = 0;
    for (const auto& pt : branch.points) k += pt.stable ? 1 : 0;
    return k;
  }();
  summary["points"] = branch.points.size();
  write_text_file(join(cfg.out_dir, stem + "_summary.json"), summary.dump(2) + "\n");

  std::cout << "branch: " << branch.points.size() << " points, "
            << (branch.complete ? "complete" : ("truncated: " + branch.diagnostic)) << "\n";
  return branch.complete ? 0 : 1;
}

int cmd_verify(const CommonArgs& args, const std::string& id) {
  const Config cfg = make_config(args);
  const CheckReport report = run_check(cfg, id);
  const std::string json = report_json(report);
  write_text_file(join(cfg.out_dir, "verify_" + report.id + ".json"), json);
  std::cout << json;
  return report.passed ? 0 : 1;
}

int cmd_solve(const CommonArgs& args) {
  const Config cfg = make_config(args);
  const Grid grid = cfg.grid.make();
  const auto seeds = default_seeds(grid, cfg.params, cfg.seed);
  DeflationOptions options;
  options.max_attempts = cfg.max_attempts;
  auto records = deflated_solve(cfg.params, seeds, options);
  for (auto& rec : records) {
    if (rec.classification == Classification::coexistence)
      rec.stability = stability_from_spectrum(linearized_spectrum(rec.state, cfg.params, 6));
  }

  write_text_file(join(cfg.out_dir, "solutions.csv"), records_csv(records));
  nlohmann::json index = nlohmann::json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const std::string u_name = "solution_" + std::to_string(i) + "_u.csv";
    const std::string v_name = "solution_" + std::to_string(i) + "_v.csv";
    write_text_file(join(cfg.out_dir, u_name), field_csv(rec.state.u));
    write_text_file(join(cfg.out_dir, v_name), field_csv(rec.state.v));
    index.push_back({{"params",
                      {{"a", rec.params.a},
                       {"b", rec.params.b},
                       {"c", rec.params.c},
                       {"d", rec.params.d},
                       {"alpha", rec.params.alpha},
                       {"beta", rec.params.beta}}},
                     {"residual_norm", rec.residual_norm},
                     {"classification", to_string(rec.classification)},
                     {"stability", to_string(rec.stability)},
                     {"u_csv", u_name},
                     {"v_csv", v_name}});
  }
  write_text_file(join(cfg.out_dir, "solutions.json"), index.dump(2) + "\n");
  std::cout << "solve: " << records.size() << " records; wrote solutions.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady states, multiplicity and bifurcation for the saturated "
               "competition system"};
  app.require_subcommand(1);

  CommonArgs thresholds_args, sweep_args, branch_args, verify_args, solve_args;
  std::string branch_which, verify_id;

  add_common(app.add_subcommand("thresholds", "bifurcation threshold curves a0(c), c0(a)"),
             thresholds_args);
  add_common(app.add_subcommand("sweep", "classify the (a, c) parameter plane"), sweep_args);
  CLI::App* branch_cmd =
      app.add_subcommand("branch", "continue a bifurcating solution branch");
  add_common(branch_cmd, branch_args);
  branch_cmd->add_option("--which", branch_which, "a or c (overrides config)");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run one theorem check recipe");
  add_common(verify_cmd, verify_args);
  verify_cmd->add_option("--theorem", verify_id, "check id, e.g. 6.1")->required();
  add_common(app.add_subcommand("solve", "deflated multi-solve at the configured parameters"),
             solve_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("thresholds")) return cmd_thresholds(thresholds_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args);
    if (app.got_subcommand("branch")) return cmd_branch(branch_args, branch_which);
    if (app.got_subcommand("verify")) return cmd_verify(verify_args, verify_id);
    if (app.got_subcommand("solve")) return cmd_solve(solve_args);
  } catch (const bazykin::precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
