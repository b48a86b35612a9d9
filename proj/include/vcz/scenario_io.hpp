#pragma once

// Scenario file format: line-oriented, sectioned key = value text.
//
//   # comment
//   name = benchmark
//
//   [plant]            model = benchmark | integrator | expr
//                      dim, sign_class, f<i>, g<i>_<j>, w<i>   (expr; missing entries are 0)
//   [virtual]          model = integrator | expr;  m, f<i>, g<i>_<j>  (expr)
//   [obstacle]         repeatable, kept in order;  kind = static | linear | custom,
//                      center, velocity (linear), path<i> (custom), radius
//   [target]           center, radius
//   [vcz]              r_c
//   [horizon]          t_f, dt
//   [shrink]           r_start, r_end
//   [controller]       k, alphas, qp_H (row-major), qp_F, epsilon_sat, u_c_ceiling
//   [initial_state]    x0
//   [run]              seed
//
// Vectors are whitespace-separated numbers. Expressions use the prefix grammar
// from expr.hpp. serialize_scenario emits a canonical form that parses back to
// an identical Scenario.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vcz/errors.hpp"
#include "vcz/expr.hpp"
#include "vcz/scenario.hpp"

namespace vcz {

namespace detail {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;

  bool has(const std::string& key) const { return entries.count(key) > 0; }

  const Entry& get(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) throw ParseError(line, key, "missing required key in [" + name + "]");
    it->second.used = true;
    return it->second;
  }

  double number(const std::string& key) {
    const auto& e = get(key);
    double v = 0.0;
    if (!parse_double(trim(e.value), v)) throw ParseError(e.line, key, "expected a finite number, got '" + e.value + "'");
    return v;
  }
  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const std::string& key) {
    const auto& e = get(key);
    const std::string s = trim(e.value);
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ParseError(e.line, key, "expected an integer, got '" + e.value + "'");
    return v;
  }

  Eigen::VectorXd vector(const std::string& key) {
    const auto& e = get(key);
    std::vector<double> vals;
    std::istringstream in(e.value);
    std::string tok;
    while (in >> tok) {
      double v = 0.0;
      if (!parse_double(tok, v)) throw ParseError(e.line, key, "expected a finite number, got '" + tok + "'");
      vals.push_back(v);
    }
    if (vals.empty()) throw ParseError(e.line, key, "expected at least one number");
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  }

  Expr expr(const std::string& key) {
    const auto& e = get(key);
    try {
      return Expr::parse(e.value);
    } catch (const InvalidInput& err) {
      throw ParseError(e.line, key, err.what());
    }
  }
  Expr expr_or_zero(const std::string& key) { return has(key) ? expr(key) : Expr::constant(0.0); }

  std::string word(const std::string& key) { return trim(get(key).value); }

  void reject_unused() const {
    for (const auto& [k, e] : entries)
      if (!e.used) throw ParseError(e.line, k, "unknown key in [" + name + "]");
  }

  static std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
  }
};

inline Eigen::Index dimension(Section& sec, const std::string& key) {
  const auto n = sec.integer(key);
  if (n < 1 || n > 64) throw ParseError(sec.entries.at(key).line, key, "dimension must be in [1, 64]");
  return static_cast<Eigen::Index>(n);
}

inline PlantModel parse_plant(Section& sec) {
  const std::string model = sec.word("model");
  PlantModel p;
  if (model == "benchmark") {
    p = benchmark_plant();
  } else if (model == "integrator") {
    p = integrator_plant(dimension(sec, "dim"));
  } else if (model == "expr") {
    const Eigen::Index n = dimension(sec, "dim");
    p.catalog = "expr";
    p.n = n;
    p.input.rows = p.input.cols = n;
    for (Eigen::Index i = 1; i <= n; ++i) {
      p.drift.comps.push_back(sec.expr_or_zero("f" + std::to_string(i)));
      p.disturbance.comps.push_back(sec.expr_or_zero("w" + std::to_string(i)));
      for (Eigen::Index j = 1; j <= n; ++j)
        p.input.entries.push_back(sec.expr_or_zero("g" + std::to_string(i) + "_" + std::to_string(j)));
    }
  } else {
    throw ParseError(sec.entries.at("model").line, "model", "unknown plant model '" + model + "'");
  }
  if (sec.has("sign_class")) {
    const std::string sc = sec.word("sign_class");
    if (sc == "positive_definite") p.sign_class = SignClass::PositiveDefinite;
    else if (sc == "negative_definite") p.sign_class = SignClass::NegativeDefinite;
    else throw ParseError(sec.entries.at("sign_class").line, "sign_class", "expected positive_definite or negative_definite");
  }
  return p;
}

inline VirtualSystem parse_virtual(Section& sec, Eigen::Index n) {
  const std::string model = sec.word("model");
  if (model == "integrator") return VirtualSystem::single_integrator(n);
  if (model != "expr") throw ParseError(sec.entries.at("model").line, "model", "unknown virtual model '" + model + "'");
  VirtualSystem v;
  v.catalog = "expr";
  v.n = n;
  v.m = dimension(sec, "m");
  v.input.rows = n;
  v.input.cols = v.m;
  for (Eigen::Index i = 1; i <= n; ++i) {
    v.drift.comps.push_back(sec.expr_or_zero("f" + std::to_string(i)));
    for (Eigen::Index j = 1; j <= v.m; ++j)
      v.input.entries.push_back(sec.expr_or_zero("g" + std::to_string(i) + "_" + std::to_string(j)));
  }
  return v;
}

inline Obstacle parse_obstacle(Section& sec) {
  const std::string kind = sec.word("kind");
  const double r = sec.number("radius");
  if (kind == "static") return Obstacle::fixed(sec.vector("center"), r);
  if (kind == "linear") return Obstacle::moving(sec.vector("center"), sec.vector("velocity"), r);
  if (kind == "custom") {
    VectorField path;
    for (int i = 1; sec.has("path" + std::to_string(i)); ++i) path.comps.push_back(sec.expr("path" + std::to_string(i)));
    if (path.comps.empty()) throw ParseError(sec.line, "path1", "custom obstacle needs path1..pathN");
    if (path.max_var_index() >= 0) throw ParseError(sec.line, "path1", "obstacle path may depend on t only");
    return Obstacle::custom(std::move(path), r);
  }
  throw ParseError(sec.entries.at("kind").line, "kind", "unknown obstacle kind '" + kind + "'");
}

inline std::string join(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
  return out;
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) {
  std::vector<detail::Section> sections;
  sections.push_back({"", 0, {}});
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::Section::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "", "malformed section header '" + line + "'");
      sections.push_back({detail::Section::trim(line.substr(1, line.size() - 2)), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "", "expected 'key = value', got '" + line + "'");
    const std::string key = detail::Section::trim(line.substr(0, eq));
    const std::string value = detail::Section::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "", "empty key");
    auto& sec = sections.back();
    if (sec.entries.count(key)) throw ParseError(line_no, key, "duplicate key");
    sec.entries[key] = {value, line_no, false};
  }

  static const char* known[] = {"plant", "virtual", "obstacle", "target", "vcz",
                                "horizon", "shrink", "controller", "initial_state", "run"};
  std::map<std::string, detail::Section*> single;
  std::vector<detail::Section*> obstacle_secs;
  for (std::size_t i = 1; i < sections.size(); ++i) {
    auto& sec = sections[i];
    if (std::find(std::begin(known), std::end(known), sec.name) == std::end(known))
      throw ParseError(sec.line, "", "unknown section [" + sec.name + "]");
    if (sec.name == "obstacle") {
      obstacle_secs.push_back(&sec);
      continue;
    }
    if (single.count(sec.name)) throw ParseError(sec.line, "", "duplicate section [" + sec.name + "]");
    single[sec.name] = &sec;
  }
  auto require = [&](const std::string& name) -> detail::Section& {
    auto it = single.find(name);
    if (it == single.end()) throw ParseError(0, "", "missing section [" + name + "]");
    return *it->second;
  };

  Scenario s;
  auto& top = sections.front();
  top.name = "top level";
  if (top.has("name")) s.name = top.word("name");

  auto& plant = require("plant");
  s.plant = detail::parse_plant(plant);
  const Eigen::Index n = s.plant.n;

  if (auto it = single.find("virtual"); it != single.end()) {
    s.virtual_system = detail::parse_virtual(*it->second, n);
  } else {
    s.virtual_system = VirtualSystem::single_integrator(n);
  }

  for (auto* sec : obstacle_secs) s.obstacles.push_back(detail::parse_obstacle(*sec));

  auto& target = require("target");
  s.target = {target.vector("center"), target.number("radius")};

  s.r_c = require("vcz").number("r_c");

  auto& horizon = require("horizon");
  s.shrink.t_f = horizon.number("t_f");
  s.dt = horizon.number_or("dt", s.dt);

  auto& shrink = require("shrink");
  s.shrink.r_start = shrink.number("r_start");
  s.shrink.r_end = shrink.number("r_end");

  if (auto it = single.find("controller"); it != single.end()) {
    auto& ctl = *it->second;
    s.k = ctl.number_or("k", s.k);
    s.epsilon_sat = ctl.number_or("epsilon_sat", s.epsilon_sat);
    s.u_c_ceiling = ctl.number_or("u_c_ceiling", s.u_c_ceiling);
    if (ctl.has("alphas")) {
      const Eigen::VectorXd a = ctl.vector("alphas");
      for (Eigen::Index i = 0; i < a.size(); ++i) s.alphas.push_back({a[i]});
    }
    if (ctl.has("qp_H")) {
      const Eigen::VectorXd h = ctl.vector("qp_H");
      const Eigen::Index m = s.virtual_system.m;
      if (h.size() != m * m)
        throw ParseError(ctl.entries.at("qp_H").line, "qp_H", "expected " + std::to_string(m * m) + " numbers (row-major m x m)");
      s.qp_H = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(h.data(), m, m);
    }
    if (ctl.has("qp_F")) s.qp_F = ctl.vector("qp_F");
    ctl.reject_unused();
  }

  s.x0 = require("initial_state").vector("x0");

  if (auto it = single.find("run"); it != single.end()) {
    const auto seed = it->second->integer("seed");
    if (seed < 0) throw ParseError(it->second->entries.at("seed").line, "seed", "seed must be >= 0");
    s.seed = static_cast<std::uint64_t>(seed);
    it->second->reject_unused();
  }

  for (auto& sec : sections) sec.reject_unused();
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "", "cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "name = " << s.name << "\n\n[plant]\nmodel = " << s.plant.catalog << "\n";
  if (s.plant.catalog != "benchmark") out << "dim = " << s.plant.n << "\n";
  if (s.plant.catalog == "expr") {
    const Eigen::Index n = s.plant.n;
    for (Eigen::Index i = 0; i < n; ++i) out << "f" << i + 1 << " = " << s.plant.drift.comps[i].to_string() << "\n";
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        out << "g" << i + 1 << "_" << j + 1 << " = " << s.plant.input.entries[i * n + j].to_string() << "\n";
    for (Eigen::Index i = 0; i < n; ++i)
      out << "w" << i + 1 << " = " << s.plant.disturbance.comps[i].to_string() << "\n";
  }
  if (s.plant.catalog != "benchmark") out << "sign_class = " << to_string(s.plant.sign_class) << "\n";

  out << "\n[virtual]\nmodel = " << s.virtual_system.catalog << "\n";
  if (s.virtual_system.catalog == "expr") {
    const auto& v = s.virtual_system;
    out << "m = " << v.m << "\n";
    for (Eigen::Index i = 0; i < v.n; ++i) out << "f" << i + 1 << " = " << v.drift.comps[i].to_string() << "\n";
    for (Eigen::Index i = 0; i < v.n; ++i)
      for (Eigen::Index j = 0; j < v.m; ++j)
        out << "g" << i + 1 << "_" << j + 1 << " = " << v.input.entries[i * v.m + j].to_string() << "\n";
  }

  for (const auto& o : s.obstacles) {
    out << "\n[obstacle]\nkind = " << to_string(o.kind) << "\n";
    if (o.kind == ObstacleKind::Custom) {
      for (std::size_t i = 0; i < o.path.comps.size(); ++i)
        out << "path" << i + 1 << " = " << o.path.comps[i].to_string() << "\n";
    } else {
      out << "center = " << detail::join(o.origin) << "\n";
      if (o.kind == ObstacleKind::Linear) out << "velocity = " << detail::join(o.velocity) << "\n";
    }
    out << "radius = " << format_double(o.radius) << "\n";
  }

  out << "\n[target]\ncenter = " << detail::join(s.target.center) << "\nradius = " << format_double(s.target.radius)
      << "\n\n[vcz]\nr_c = " << format_double(s.r_c) << "\n\n[horizon]\nt_f = " << format_double(s.shrink.t_f)
      << "\ndt = " << format_double(s.dt) << "\n\n[shrink]\nr_start = " << format_double(s.shrink.r_start)
      << "\nr_end = " << format_double(s.shrink.r_end) << "\n\n[controller]\nk = " << format_double(s.k)
      << "\nepsilon_sat = " << format_double(s.epsilon_sat) << "\nu_c_ceiling = " << format_double(s.u_c_ceiling)
      << "\n";
  if (!s.alphas.empty()) {
    out << "alphas =";
    for (const auto& a : s.alphas) out << " " << format_double(a.slope);
    out << "\n";
  }
  if (s.qp_H.size()) {
    out << "qp_H =";
    for (Eigen::Index i = 0; i < s.qp_H.rows(); ++i)
      for (Eigen::Index j = 0; j < s.qp_H.cols(); ++j) out << " " << format_double(s.qp_H(i, j));
    out << "\n";
  }
  if (s.qp_F.size()) out << "qp_F = " << detail::join(s.qp_F) << "\n";
  out << "\n[initial_state]\nx0 = " << detail::join(s.x0) << "\n\n[run]\nseed = " << s.seed << "\n";
  return out.str();
}

/// FNV-1a over the canonical serialization.
inline std::uint64_t scenario_hash(const Scenario& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_scenario(s)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vcz
