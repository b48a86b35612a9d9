#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vcz/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reach-avoid control through a virtual confinement zone"};
  app.require_subcommand(1);

  vcz::cli::Overrides ov;
  std::optional<double> dt, tf;
  std::optional<std::uint64_t> seed;
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--dt", dt, "integration step override [s]");
    cmd->add_option("--tf", tf, "horizon override [s]");
    cmd->add_option("--seed", seed, "seed override");
  };

  std::string scenario_path;
  auto* validate = app.add_subcommand("validate", "check scenario preconditions");
  validate->add_option("scenario", scenario_path, "scenario file")->required();
  add_overrides(validate);

  vcz::cli::RunOptions run_opt;
  auto* run = app.add_subcommand("run", "validate, simulate, write trace and metrics");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", run_opt.out_dir, "output directory")->capture_default_str();
  run->add_option("--decimate", run_opt.decimate, "write every k-th trace record")->check(CLI::PositiveNumber);
  add_overrides(run);

  std::string trace_path, svg_path = "figure.svg";
  std::vector<double> snapshots;
  auto* plot = app.add_subcommand("plot", "render a trace as SVG");
  plot->add_option("trace", trace_path, "trace file")->required();
  plot->add_option("scenario", scenario_path, "scenario file the trace was produced from")->required();
  plot->add_option("--out", svg_path, "output SVG")->capture_default_str();
  plot->add_option("--snapshots", snapshots, "obstacle snapshot times [s]")->delimiter(',');

  int count = 20;
  std::uint64_t suite_seed = 1;
  std::optional<double> suite_dt;
  auto* suite = app.add_subcommand("suite", "randomized forward-invariance campaign");
  suite->add_option("--seed", suite_seed, "first scenario seed")->capture_default_str();
  suite->add_option("--count", count, "number of scenarios")->capture_default_str()->check(CLI::PositiveNumber);
  suite->add_option("--dt", suite_dt, "integration step [s]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vcz::cli::kParseError;
  }
  ov.dt = dt;
  ov.t_f = tf;
  ov.seed = seed;
  run_opt.overrides = ov;

  try {
    if (*validate) return vcz::cli::cmd_validate(scenario_path, ov, std::cout, std::cerr);
    if (*run) return vcz::cli::cmd_run(scenario_path, run_opt, std::cout, std::cerr);
    if (*plot) return vcz::cli::cmd_plot(trace_path, scenario_path, svg_path, snapshots, std::cout, std::cerr);
    if (*suite) return vcz::cli::cmd_suite(suite_seed, count, suite_dt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vcz::cli::kAbort;
  }
  return 0;
}
