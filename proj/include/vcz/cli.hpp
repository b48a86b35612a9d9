#pragma once

// Command implementations behind the `vcz` executable.
// Exit codes: 0 pass, 1 verdict or validation failure, 2 parse error, 3 runtime abort.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vcz/scenario.hpp"
#include "vcz/scenario_io.hpp"
#include "vcz/simulator.hpp"
#include "vcz/suite.hpp"
#include "vcz/svg_plot.hpp"
#include "vcz/trace_io.hpp"

namespace vcz::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kParseError = 2, kAbort = 3 };

struct Overrides {
  std::optional<double> dt;
  std::optional<double> t_f;
  std::optional<std::uint64_t> seed;
};

inline void apply(const Overrides& o, Scenario& s) {
  if (o.dt) s.dt = *o.dt;
  if (o.t_f) s.shrink.t_f = *o.t_f;
  if (o.seed) s.seed = *o.seed;
}

inline void print_report(std::ostream& out, const ValidationReport& rep) {
  for (const auto& c : rep.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.id << "  " << c.description;
    if (std::isfinite(c.worst_margin)) out << "  worst_margin=" << format_g17(c.worst_margin) << " at t=" << c.worst_time;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
  }
}

inline void print_verification(std::ostream& out, const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    out << (!c.evaluable ? "N/A  " : c.passed ? "PASS " : "FAIL ") << c.id << "  " << c.description;
    if (std::isfinite(c.worst_margin)) out << "  worst_margin=" << format_g17(c.worst_margin) << " at t=" << c.worst_time;
    if (c.violations) out << "  violations=" << c.violations;
    out << "\n";
  }
}

inline std::optional<Scenario> load_or_report(const std::string& path, std::ostream& err) {
  try {
    return load_scenario(path);
  } catch (const ParseError& e) {
    err << "parse error in " << path << ": " << e.what() << "\n";
  } catch (const InvalidInput& e) {
    err << "parse error in " << path << ": " << e.what() << "\n";
  }
  return std::nullopt;
}

inline int cmd_validate(const std::string& path, const Overrides& ov, std::ostream& out, std::ostream& err) {
  auto s = load_or_report(path, err);
  if (!s) return kParseError;
  apply(ov, *s);
  const auto rep = validate(*s);
  print_report(out, rep);
  const bool ok = rep.all_mandatory_passed();
  out << (ok ? "scenario valid\n" : "scenario INVALID\n");
  return ok ? kPass : kFail;
}

struct RunOptions {
  Overrides overrides;
  std::string out_dir = "vcz_out";
  int decimate = 1;
};

inline int cmd_run(const std::string& path, const RunOptions& opt, std::ostream& out, std::ostream& err) {
  auto s = load_or_report(path, err);
  if (!s) return kParseError;
  apply(opt.overrides, *s);
  const auto rep = validate(*s);
  if (!rep.all_mandatory_passed()) {
    print_report(out, rep);
    out << "scenario INVALID; not running\n";
    return kFail;
  }
  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path dir(opt.out_dir);

  RunResult r;
  try {
    r = run(*s);
  } catch (const InvalidInput& e) {
    err << "run rejected: " << e.what() << "\n";
    return kFail;
  }
  {
    std::ofstream f(dir / "scenario.vcz");
    f << serialize_scenario(*s);
  }
  {
    std::ofstream f(dir / "trace.csv");
    write_trace(f, r.trace, opt.decimate);
  }
  {
    std::ofstream f(dir / "metrics.txt");
    write_metrics(f, r.metrics, r.abort_message);
  }
  write_metrics(out, r.metrics, r.abort_message);
  if (r.abort != AbortKind::None) {
    err << "run aborted: " << r.abort_message << "\n";
    return kAbort;
  }
  print_verification(out, verify_trace(r.trace, *s));
  return r.metrics.ptra_pass ? kPass : kFail;
}

inline int cmd_plot(const std::string& trace_path, const std::string& scenario_path, const std::string& out_svg,
                    const std::vector<double>& snapshots, std::ostream& out, std::ostream& err) {
  auto s = load_or_report(scenario_path, err);
  if (!s) return kParseError;
  SimTrace trace;
  try {
    std::ifstream in(trace_path);
    if (!in) throw ParseError(0, "", "cannot open trace file '" + trace_path + "'");
    trace = read_trace(in);
  } catch (const ParseError& e) {
    err << "parse error in " << trace_path << ": " << e.what() << "\n";
    return kParseError;
  }
  if (trace.scenario_hash != scenario_hash(*s)) {
    err << "scenario hash mismatch: trace " << hash_hex(trace.scenario_hash) << " vs scenario "
        << hash_hex(scenario_hash(*s)) << "\n";
    return kFail;
  }
  std::ofstream f(out_svg);
  if (!f) {
    err << "cannot write " << out_svg << "\n";
    return kFail;
  }
  f << plot_run_svg(trace, *s, snapshots.empty() ? default_snapshots(s->t_f()) : snapshots);
  out << "wrote " << out_svg << "\n";
  return kPass;
}

inline int cmd_suite(std::uint64_t seed, int count, std::optional<double> dt, std::ostream& out) {
  RandomScenarioOptions opt;
  if (dt) opt.dt = *dt;
  const SuiteResult res = run_invariance_suite(seed, count, opt);
  out << std::left << std::setw(10) << "seed" << std::setw(11) << "obstacles" << std::setw(12) << "outcome"
      << std::setw(16) << "min_h" << std::setw(16) << "terminal_dist" << "max_e_hat\n";
  for (const auto& e : res.entries) {
    const char* outcome = e.abort == AbortKind::QpInfeasible        ? "infeasible"
                          : e.abort == AbortKind::ConfinementBreach ? "breach"
                          : e.ptra_pass                             ? "pass"
                                                                    : "fail";
    out << std::setw(10) << e.seed << std::setw(11) << e.obstacles << std::setw(12) << outcome << std::setw(16)
        << e.min_barrier << std::setw(16) << e.terminal_distance << e.max_e_hat << "\n";
  }
  out << "runs: " << res.entries.size() << ", excluded (QP infeasible): " << res.excluded_infeasible()
      << ", invariance violations: " << res.violations() << "\n";
  return res.violations() == 0 ? kPass : kFail;
}

}  // namespace vcz::cli
