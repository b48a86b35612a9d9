#pragma once

// Trace export: one metadata comment line, one header row, then one comma-separated
// row per record. Numbers carry 17 significant digits.
//
//   # vcz-trace version=1 scenario_hash=<hex> dt=<dt> n=<n> m=<m> d=<d>
//   t,x1..xn,c1..cn,u1..un,uc1..ucm,h1..hd,e_hat,qp_status,qp_kkt

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vcz/errors.hpp"
#include "vcz/scenario_io.hpp"
#include "vcz/simulator.hpp"

namespace vcz {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes every `decimate`-th record plus the final one.
inline void write_trace(std::ostream& out, const SimTrace& trace, int decimate = 1) {
  if (decimate < 1) throw InvalidInput("write_trace: decimate must be >= 1");
  Eigen::Index n = 0, m = 0, d = 0;
  if (!trace.records.empty()) {
    n = trace.records.front().x.size();
    m = trace.records.front().u_c.size();
    d = trace.records.front().h.size();
  }
  out << "# vcz-trace version=" << trace.version << " scenario_hash=" << hash_hex(trace.scenario_hash)
      << " dt=" << format_g17(trace.dt) << " n=" << n << " m=" << m << " d=" << d << "\n";
  out << "t";
  for (const char* p : {"x", "c", "u"})
    for (Eigen::Index i = 1; i <= n; ++i) out << "," << p << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",uc" << i;
  for (Eigen::Index i = 1; i <= d; ++i) out << ",h" << i;
  out << ",e_hat,qp_status,qp_kkt\n";

  auto vec = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << "," << format_g17(v[i]);
  };
  const std::size_t count = trace.records.size();
  for (std::size_t k = 0; k < count; ++k) {
    if (k % static_cast<std::size_t>(decimate) != 0 && k + 1 != count) continue;
    const auto& r = trace.records[k];
    out << format_g17(r.t);
    vec(r.x);
    vec(r.c);
    vec(r.u);
    vec(r.u_c);
    vec(r.h);
    out << "," << format_g17(r.e_hat) << "," << to_string(r.qp_status) << "," << format_g17(r.qp_kkt) << "\n";
  }
}

inline SimTrace read_trace(std::istream& in) {
  SimTrace trace;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vcz-trace", 0) != 0) throw ParseError(1, "", "missing trace metadata line");
  long n = -1, m = -1, d = -1;
  bool have_hash = false;
  {
    std::istringstream meta(line.substr(11));
    std::string kv;
    while (meta >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "version") trace.version = val;
      else if (key == "scenario_hash") {
        trace.scenario_hash = std::stoull(val, nullptr, 16);
        have_hash = true;
      } else if (key == "dt") trace.dt = std::stod(val);
      else if (key == "n") n = std::stol(val);
      else if (key == "m") m = std::stol(val);
      else if (key == "d") d = std::stol(val);
    }
  }
  if (!have_hash || n < 0 || m < 0 || d < 0) throw ParseError(1, "", "incomplete trace metadata");
  if (!std::getline(in, line)) throw ParseError(2, "", "missing trace header row");
  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    const std::size_t expected = static_cast<std::size_t>(1 + 3 * n + m + d + 3);
    if (cells.size() != expected) throw ParseError(line_no, "", "wrong column count in trace row");
    std::size_t idx = 0;
    auto num = [&]() {
      double v = 0.0;
      if (!parse_double(cells[idx], v)) throw ParseError(line_no, "", "bad number '" + cells[idx] + "'");
      ++idx;
      return v;
    };
    auto vec = [&](long len) {
      Eigen::VectorXd v(len);
      for (long i = 0; i < len; ++i) v[i] = num();
      return v;
    };
    TraceRecord r;
    r.t = num();
    r.x = vec(n);
    r.c = vec(n);
    r.u = vec(n);
    r.u_c = vec(m);
    r.h = vec(d);
    r.e_hat = num();
    const std::string& st = cells[idx++];
    if (st == "optimal") r.qp_status = QpStatus::Optimal;
    else if (st == "degenerate") r.qp_status = QpStatus::Degenerate;
    else if (st == "infeasible") r.qp_status = QpStatus::Infeasible;
    else throw ParseError(line_no, "", "bad qp status '" + st + "'");
    r.qp_kkt = num();
    trace.records.push_back(std::move(r));
  }
  return trace;
}

inline void write_metrics(std::ostream& out, const RunMetrics& m, const std::string& abort_message = {}) {
  out << "ptra_verdict = " << (m.ptra_pass ? "pass" : "fail") << "\n"
      << "run_verdict = " << (m.run_pass() ? "pass" : "fail") << "\n"
      << "completed = " << (m.completed ? "true" : "false") << "\n"
      << "terminal_distance = " << format_g17(m.terminal_distance) << "\n"
      << "min_true_clearance = " << format_g17(m.min_true_clearance) << "\n"
      << "min_center_clearance = " << format_g17(m.min_center_clearance) << "\n"
      << "max_e_hat = " << format_g17(m.max_e_hat) << "\n"
      << "max_u_c_norm = " << format_g17(m.max_u_c_norm) << "\n"
      << "max_u_norm = " << format_g17(m.max_u_norm) << "\n"
      << "min_barrier = " << format_g17(m.min_barrier) << "\n"
      << "min_regularity_margin = " << format_g17(m.min_regularity_margin) << "\n"
      << "all_qp_certified = " << (m.all_qp_certified ? "true" : "false") << "\n"
      << "u_c_within_ceiling = " << (m.u_c_within_ceiling ? "true" : "false") << "\n"
      << "failure_reason = " << m.failure_reason << "\n";
  if (!abort_message.empty()) out << "abort = " << abort_message << "\n";
}

}  // namespace vcz
