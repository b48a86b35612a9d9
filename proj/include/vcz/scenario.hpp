#pragma once

// A complete reach-avoid problem instance, and the validator that checks the
// preconditions of the closed-loop guarantee before anything is simulated.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vcz/barriers.hpp"
#include "vcz/confinement.hpp"
#include "vcz/errors.hpp"
#include "vcz/expr.hpp"
#include "vcz/plant.hpp"
#include "vcz/qp.hpp"

namespace vcz {

/// Nominal dynamics of the zone center: dc/dt = f_c(c) + g_c(c) u_c.
struct VirtualSystem {
  std::string catalog = "integrator";  // "integrator" or "expr"
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  VectorField drift;  // n
  MatrixField input;  // n x m

  static VirtualSystem single_integrator(Eigen::Index n) {
    VirtualSystem v;
    v.catalog = "integrator";
    v.n = n;
    v.m = n;
    v.drift = VectorField::constant(Eigen::VectorXd::Zero(n));
    v.input = MatrixField::constant(Eigen::MatrixXd::Identity(n, n));
    return v;
  }

  void check() const {
    if (n < 1 || m < 1) throw InvalidInput("virtual system: dimensions must be >= 1");
    if (drift.size() != n) throw InvalidInput("virtual system: drift has wrong length");
    if (input.rows != n || input.cols != m || static_cast<Eigen::Index>(input.entries.size()) != n * m)
      throw InvalidInput("virtual system: input map must be n x m");
    if (drift.max_var_index() >= n || input.max_var_index() >= n)
      throw InvalidInput("virtual system: expression references a state beyond dimension n");
  }

  Eigen::VectorXd f_c(const Eigen::VectorXd& c) const { return drift.eval(c, 0.0); }
  Eigen::MatrixXd g_c(const Eigen::VectorXd& c) const { return input.eval(c, 0.0); }

  friend bool operator==(const VirtualSystem&, const VirtualSystem&) = default;
};

struct Scenario {
  std::string name = "scenario";
  PlantModel plant;
  std::vector<Obstacle> obstacles;
  TargetSet target;
  double r_c = 0.5;
  ShrinkSchedule shrink;  // also carries the horizon t_f
  Eigen::VectorXd x0;
  VirtualSystem virtual_system;
  /// Empty: slope 1 on every row. One entry: shared by all rows. Otherwise one per row
  /// (obstacles in declaration order, reach row last).
  std::vector<ClassKappa> alphas;
  Eigen::MatrixXd qp_H;  // empty: identity
  Eigen::VectorXd qp_F;  // empty: zero
  double k = 10.0;
  double epsilon_sat = 1e-9;
  double u_c_ceiling = 100.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;

  double t_f() const { return shrink.t_f; }
  std::size_t num_rows() const { return obstacles.size() + 1; }

  ClassKappa alpha(std::size_t row) const {
    if (alphas.empty()) return ClassKappa{1.0};
    if (alphas.size() == 1) return alphas.front();
    if (row >= alphas.size()) throw InvalidInput("scenario: no class-K slope for row " + std::to_string(row));
    return alphas[row];
  }
  Eigen::MatrixXd cost_H() const {
    return qp_H.size() ? qp_H : Eigen::MatrixXd::Identity(virtual_system.m, virtual_system.m);
  }
  Eigen::VectorXd cost_F() const { return qp_F.size() ? qp_F : Eigen::VectorXd::Zero(virtual_system.m); }
  ConfinementLaw confinement() const { return {k, r_c, epsilon_sat}; }

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.name == b.name && a.plant == b.plant && a.obstacles == b.obstacles && a.target == b.target &&
           a.r_c == b.r_c && a.shrink == b.shrink && same_values(a.x0, b.x0) &&
           a.virtual_system == b.virtual_system && a.alphas == b.alphas && same_values(a.qp_H, b.qp_H) &&
           same_values(a.qp_F, b.qp_F) && a.k == b.k && a.epsilon_sat == b.epsilon_sat &&
           a.u_c_ceiling == b.u_c_ceiling && a.dt == b.dt && a.seed == b.seed;
  }
};

/// Parameters of the reference benchmark: a static and a moving obstacle, target B([10,10], 1.1), t_f = 10 s.
inline Scenario benchmark_scenario() {
  Scenario s;
  s.name = "benchmark";
  s.plant = benchmark_plant();
  s.obstacles = {Obstacle::fixed(Eigen::Vector2d(1.5, 2.0), 0.5),
                 Obstacle::moving(Eigen::Vector2d(5.0, 5.0), Eigen::Vector2d(0.4, -0.4), 1.5)};
  s.target = {Eigen::Vector2d(10.0, 10.0), 1.1};
  s.r_c = 0.5;
  s.shrink = {15.0, 0.5, 10.0};
  s.x0 = Eigen::Vector2d(0.0, 0.0);
  s.virtual_system = VirtualSystem::single_integrator(2);
  s.k = 10.0;
  s.dt = 1e-3;
  return s;
}

struct CheckResult {
  std::string id;
  std::string description;
  bool passed = true;
  bool mandatory = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_time = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_mandatory_passed() const {
    for (const auto& c : checks)
      if (c.mandatory && !c.passed) return false;
    return true;
  }
  const CheckResult* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

/// min_j ||c - b_j(t)|| - (r_j + r_c); nonnegative iff c is outside the inflated obstacles.
inline double tightened_unsafe_distance(const Eigen::VectorXd& c, double t, const Scenario& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : s.obstacles) best = std::min(best, (c - o.center(t)).norm() - (o.radius + s.r_c));
  return best;
}

namespace detail {

inline std::string structure_problem(const Scenario& s) {
  try {
    s.plant.check();
    s.virtual_system.check();
  } catch (const InvalidInput& e) {
    return e.what();
  }
  const Eigen::Index n = s.plant.n;
  if (s.virtual_system.n != n) return "virtual system dimension differs from plant dimension";
  if (s.x0.size() != n) return "initial state has wrong dimension";
  if (s.target.center.size() != n) return "target center has wrong dimension";
  for (std::size_t j = 0; j < s.obstacles.size(); ++j) {
    const auto& o = s.obstacles[j];
    if (o.dim() != n) return "obstacle " + std::to_string(j + 1) + " has wrong dimension";
    if (o.kind == ObstacleKind::Linear && o.velocity.size() != n)
      return "obstacle " + std::to_string(j + 1) + " velocity has wrong dimension";
    if (!(o.radius > 0)) return "obstacle " + std::to_string(j + 1) + " radius must be positive";
  }
  const Eigen::Index m = s.virtual_system.m;
  if (s.qp_H.size() && (s.qp_H.rows() != m || s.qp_H.cols() != m)) return "qp H must be m x m";
  if (s.qp_F.size() && s.qp_F.size() != m) return "qp F must have length m";
  if (s.alphas.size() > 1 && s.alphas.size() != s.num_rows())
    return "alphas must have 1 or (obstacles + 1) entries";
  for (const auto& a : s.alphas)
    if (!(a.slope > 0)) return "class-K slopes must be positive";
  if (!(s.t_f() > 0)) return "t_f must be positive";
  if (!(s.dt > 0)) return "dt must be positive";
  if (!(s.r_c > 0)) return "r_c must be positive";
  if (!(s.target.radius > 0)) return "target radius must be positive";
  if (!(s.epsilon_sat > 0 && s.epsilon_sat < 1)) return "epsilon_sat must lie in (0, 1)";
  if (s.k == 0.0) return "gain k must be nonzero";
  try {
    (void)check_problem(QpProblem{s.cost_H(), s.cost_F(), Eigen::MatrixXd(0, m), Eigen::VectorXd(0)});
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return {};
}

inline void note_margin(CheckResult& r, double margin, double t) {
  if (margin < r.worst_margin) {
    r.worst_margin = margin;
    r.worst_time = t;
  }
}

}  // namespace detail

/// Mandatory checks V0-V5 on a uniform grid of `time_samples` points over [0, t_f]:
///   V0 dimensions and parameter domains
///   V1 pairwise obstacle separation >= 2 r_c + r_i + r_j
///   V2 target obstacle-free at t_f
///   V3 initial zone clear of obstacles
///   V4 radius orderings of zone, target and shrinking set
///   V5 plant sign class matches samples and the sign of k
inline ValidationReport validate(const Scenario& s, int time_samples = 1001) {
  if (time_samples < 2) throw InvalidInput("validate: time_samples must be >= 2");
  ValidationReport rep;

  CheckResult v0{"V0", "dimensions and parameter domains"};
  v0.detail = detail::structure_problem(s);
  v0.passed = v0.detail.empty();
  v0.worst_margin = v0.passed ? 0.0 : -1.0;
  rep.checks.push_back(v0);
  if (!v0.passed) return rep;

  const double tf = s.t_f();
  auto sample_time = [&](int i) { return tf * static_cast<double>(i) / (time_samples - 1); };

  CheckResult v1{"V1", "pairwise obstacle separation >= 2 r_c + r_i + r_j"};
  for (int i = 0; i < time_samples; ++i) {
    const double t = sample_time(i);
    for (std::size_t a = 0; a < s.obstacles.size(); ++a)
      for (std::size_t b = a + 1; b < s.obstacles.size(); ++b) {
        const auto& oa = s.obstacles[a];
        const auto& ob = s.obstacles[b];
        detail::note_margin(v1, (oa.center(t) - ob.center(t)).norm() - (2 * s.r_c + oa.radius + ob.radius), t);
      }
  }
  v1.passed = v1.worst_margin >= 0;
  rep.checks.push_back(v1);

  CheckResult v2{"V2", "target set obstacle-free at t_f"};
  for (const auto& o : s.obstacles)
    detail::note_margin(v2, (o.center(tf) - s.target.center).norm() - (o.radius + s.target.radius), tf);
  v2.passed = v2.worst_margin >= 0;
  rep.checks.push_back(v2);

  CheckResult v3{"V3", "initial zone B(x0, r_c) clear of obstacles"};
  for (const auto& o : s.obstacles)
    detail::note_margin(v3, (s.x0 - o.center(0.0)).norm() - (o.radius + s.r_c), 0.0);
  v3.passed = v3.worst_margin >= 0;
  rep.checks.push_back(v3);

  CheckResult v4{"V4", "radius orderings r_c < r_R, r_end <= r_R - r_c, r_start >= |x0 - b_R|, r_start >= r_end > 0"};
  {
    const double start_gap = s.shrink.r_start - (s.x0 - s.target.center).norm();
    const double strict[] = {s.target.radius - s.r_c, s.shrink.r_end};
    const double weak[] = {s.target.radius - s.r_c - s.shrink.r_end, start_gap, s.shrink.r_start - s.shrink.r_end};
    bool ok = s.shrink.t_f == tf;
    for (double m : strict) {
      ok = ok && m > 0;
      detail::note_margin(v4, m, 0.0);
    }
    for (double m : weak) {
      ok = ok && m >= 0;
      detail::note_margin(v4, m, 0.0);
    }
    v4.passed = ok;
  }
  rep.checks.push_back(v4);

  CheckResult v5{"V5", "sign-definite (g + g')/2 with matching sign of k"};
  {
    SampleBox box{s.target.center.array() - s.shrink.r_start, s.target.center.array() + s.shrink.r_start};
    const double margin = sign_class_margin(s.plant, box, 100, s.seed);
    const bool sign_ok = (s.plant.sign_class == SignClass::PositiveDefinite) == (s.k > 0);
    v5.worst_margin = sign_ok ? margin : -std::abs(s.k);
    v5.passed = sign_ok && margin > 0;
    if (!sign_ok) v5.detail = "sign of k contradicts the declared sign class";
  }
  rep.checks.push_back(v5);
  return rep;
}

}  // namespace vcz
