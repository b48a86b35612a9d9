#pragma once

// Closed-loop simulation of the true plant and the zone center.
//
// At each grid time the CBF-QP input u_c and the confinement input u are
// computed once and held over the step (zero-order hold); (x, c) then advance
// together by one classical RK4 step of
//
//   dx/dt = f(x) + g(x) u + w(t)
//   dc/dt = f_c(c) + g_c(c) u_c

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vcz/confinement.hpp"
#include "vcz/errors.hpp"
#include "vcz/plant.hpp"
#include "vcz/qp.hpp"
#include "vcz/scenario.hpp"
#include "vcz/scenario_io.hpp"
#include "vcz/virtual_controller.hpp"

namespace vcz {

inline constexpr double kClearanceTol = 1e-6;  // workspace units
inline constexpr const char* kTraceVersion = "1";

struct SimState {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd c;
};

struct TraceRecord {
  double t = 0.0;
  Eigen::VectorXd x, c, u, u_c, h;
  double e_hat = 0.0;
  QpStatus qp_status = QpStatus::Optimal;
  double qp_kkt = 0.0;
};

struct SimTrace {
  std::vector<TraceRecord> records;
  std::uint64_t scenario_hash = 0;
  double dt = 0.0;
  std::string version = kTraceVersion;
};

struct RunMetrics {
  double min_true_clearance = std::numeric_limits<double>::infinity();
  double min_center_clearance = std::numeric_limits<double>::infinity();
  double terminal_distance = std::numeric_limits<double>::infinity();
  double max_e_hat = 0.0;
  double max_u_c_norm = 0.0;
  double max_u_norm = 0.0;
  double min_barrier = std::numeric_limits<double>::infinity();
  double min_regularity_margin = std::numeric_limits<double>::infinity();
  bool all_qp_certified = true;
  bool completed = false;
  bool u_c_within_ceiling = true;
  bool ptra_pass = false;
  std::string failure_reason;

  /// Reach-avoid verdict and the virtual-input ceiling together.
  bool run_pass() const { return ptra_pass && u_c_within_ceiling; }
};

enum class AbortKind { None, ConfinementBreach, QpInfeasible };

struct RunResult {
  SimTrace trace;
  RunMetrics metrics;
  AbortKind abort = AbortKind::None;
  std::string abort_message;
};

struct StepControls {
  Eigen::VectorXd u;
  VirtualControl virt;
  double e_hat = 0.0;
};

/// Inputs applied over [t, t + dt) from `state`. Throws QpInfeasible or ConfinementBreach.
inline StepControls compute_controls(const SimState& state, const Scenario& s) {
  StepControls out;
  out.virt = virtual_control(state.c, state.t, s);
  out.u = confinement_control(state.x, state.c, s.confinement());
  out.e_hat = (state.x - state.c).norm() / s.r_c;
  return out;
}

/// One RK4 step of the coupled system with both inputs held constant.
inline SimState advance(const SimState& state, const Eigen::VectorXd& u, const Eigen::VectorXd& u_c,
                        const Scenario& s, double h) {
  const Eigen::Index n = state.x.size();
  auto deriv = [&](double t, const Eigen::VectorXd& z) {
    Eigen::VectorXd dz(2 * n);
    const Eigen::VectorXd x = z.head(n);
    const Eigen::VectorXd c = z.tail(n);
    dz.head(n) = plant_derivative(s.plant, x, u, t);
    dz.tail(n) = s.virtual_system.f_c(c) + s.virtual_system.g_c(c) * u_c;
    return dz;
  };
  Eigen::VectorXd z(2 * n);
  z << state.x, state.c;
  const Eigen::VectorXd k1 = deriv(state.t, z);
  const Eigen::VectorXd k2 = deriv(state.t + 0.5 * h, z + 0.5 * h * k1);
  const Eigen::VectorXd k3 = deriv(state.t + 0.5 * h, z + 0.5 * h * k2);
  const Eigen::VectorXd k4 = deriv(state.t + h, z + h * k3);
  z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return {state.t + h, z.head(n), z.tail(n)};
}

inline void check_confined(const SimState& st, const Scenario& s) {
  const double e_hat = (st.x - st.c).norm() / s.r_c;
  if (e_hat >= 1.0)
    throw ConfinementBreach("confinement breach at t = " + format_double(st.t) + ": |x - c| / r_c = " +
                                format_double(e_hat),
                            e_hat);
}

/// Computes the inputs at `state`, holds them for `dt` and returns the advanced state.
inline SimState step(const SimState& state, const Scenario& s, double dt) {
  const StepControls ctl = compute_controls(state, s);
  SimState next = advance(state, ctl.u, ctl.virt.u_c, s, dt);
  check_confined(next, s);
  return next;
}

/// Grid times t_k = k dt with a final partial step landing exactly on t_f.
inline std::vector<double> time_grid(double t_f, double dt) {
  if (!(t_f > 0) || !(dt > 0)) throw InvalidInput("time grid: t_f and dt must be positive");
  const auto steps = static_cast<long>(std::ceil(t_f / dt - 1e-9));
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k < steps; ++k) ts.push_back(static_cast<double>(k) * dt);
  ts.push_back(t_f);
  return ts;
}

inline RunMetrics compute_metrics(const SimTrace& trace, const Scenario& s, bool completed) {
  RunMetrics m;
  m.completed = completed;
  for (const auto& r : trace.records) {
    for (const auto& o : s.obstacles) {
      const Eigen::VectorXd b = o.center(r.t);
      m.min_true_clearance = std::min(m.min_true_clearance, (r.x - b).norm() - o.radius);
      m.min_center_clearance = std::min(m.min_center_clearance, (r.c - b).norm() - (o.radius + s.r_c));
    }
    m.max_e_hat = std::max(m.max_e_hat, r.e_hat);
    m.max_u_c_norm = std::max(m.max_u_c_norm, r.u_c.norm());
    m.max_u_norm = std::max(m.max_u_norm, r.u.norm());
    if (r.h.size()) m.min_barrier = std::min(m.min_barrier, r.h.minCoeff());
    m.all_qp_certified = m.all_qp_certified && r.qp_status != QpStatus::Infeasible && r.qp_kkt <= 1e-9;
  }
  if (!trace.records.empty()) m.terminal_distance = (trace.records.back().x - s.target.center).norm();

  m.u_c_within_ceiling = m.max_u_c_norm <= s.u_c_ceiling;
  const bool safe = m.min_true_clearance > -kClearanceTol;
  const bool reached = completed && m.terminal_distance <= s.target.radius;
  m.ptra_pass = safe && reached;
  if (!completed) m.failure_reason = "run aborted before t_f";
  else if (!safe) m.failure_reason = "true state entered an obstacle";
  else if (!reached) m.failure_reason = "terminal state outside the target set";
  else if (!m.u_c_within_ceiling) m.failure_reason = "virtual input exceeded the configured ceiling";
  return m;
}

/// Simulates [0, t_f]. Aborts (breach or QP infeasibility) are reported in the result together
/// with the partial trace. Throws InvalidInput if the scenario fails validation.
inline RunResult run(const Scenario& s, bool track_regularity = true) {
  const ValidationReport rep = validate(s);
  if (!rep.all_mandatory_passed()) {
    std::string failed;
    for (const auto& c : rep.checks)
      if (c.mandatory && !c.passed) failed += (failed.empty() ? "" : ", ") + c.id;
    throw InvalidInput("scenario failed validation: " + failed);
  }

  RunResult res;
  res.trace.scenario_hash = scenario_hash(s);
  res.trace.dt = s.dt;
  const auto ts = time_grid(s.t_f(), s.dt);
  res.trace.records.reserve(ts.size());

  SimState st{0.0, s.x0, s.x0};
  double min_reg = std::numeric_limits<double>::infinity();
  bool completed = false;
  try {
    for (std::size_t k = 0; k < ts.size(); ++k) {
      st.t = ts[k];
      const StepControls ctl = compute_controls(st, s);
      if (track_regularity) min_reg = std::min(min_reg, regularity_margin(st.c, st.t, s));
      res.trace.records.push_back(
          {st.t, st.x, st.c, ctl.u, ctl.virt.u_c, ctl.virt.h, ctl.e_hat, ctl.virt.qp.status, ctl.virt.qp.kkt_residual});
      if (k + 1 == ts.size()) {
        completed = true;
        break;
      }
      st = advance(st, ctl.u, ctl.virt.u_c, s, ts[k + 1] - ts[k]);
      st.t = ts[k + 1];
      check_confined(st, s);
    }
  } catch (const QpInfeasible& e) {
    res.abort = AbortKind::QpInfeasible;
    res.abort_message = e.what();
  } catch (const ConfinementBreach& e) {
    res.abort = AbortKind::ConfinementBreach;
    res.abort_message = e.what();
  }
  res.metrics = compute_metrics(res.trace, s, completed);
  res.metrics.min_regularity_margin = min_reg;
  if (!completed) res.metrics.failure_reason = res.abort_message;
  return res;
}

struct TraceCheck {
  std::string id;
  std::string description;
  bool evaluable = true;
  bool passed = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_time = 0.0;
  long violations = 0;
};

struct VerificationReport {
  std::vector<TraceCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.evaluable || !c.passed) return false;
    return true;
  }
  const TraceCheck* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

/// Re-checks a trace from raw (t, x, c), ignoring the logged barrier values:
///   T1 center outside the inflated obstacles (h_j >= -invariance tol)
///   T2 center inside the shrinking ball (h_d >= -invariance tol)
///   T3 true state outside the true obstacles
///   T4 normalized error below 1
///   T5 x(t_f) in the target set (not evaluable if the trace stops early)
inline VerificationReport verify_trace(const SimTrace& trace, const Scenario& s) {
  TraceCheck t1{"T1", "center in tightened safe set"};
  TraceCheck t2{"T2", "center inside shrinking set"};
  TraceCheck t3{"T3", "true state outside true obstacles"};
  TraceCheck t4{"T4", "true state inside the confinement zone"};
  TraceCheck t5{"T5", "true state in target at t_f"};
  auto note = [](TraceCheck& c, double margin, double t, bool ok) {
    if (margin < c.worst_margin) {
      c.worst_margin = margin;
      c.worst_time = t;
    }
    if (!ok) {
      c.passed = false;
      ++c.violations;
    }
  };
  for (const auto& r : trace.records) {
    for (const auto& o : s.obstacles) {
      const double h = eval_avoidance(r.c, r.t, o, s.r_c).value;
      note(t1, h, r.t, h >= -kInvarianceTol);
      const double clear = (r.x - o.center(r.t)).norm() - o.radius;
      note(t3, clear, r.t, clear >= -kClearanceTol);
    }
    double hd = -std::numeric_limits<double>::infinity();
    try {
      hd = eval_reach(r.c, r.t, s.target.center, s.shrink).value;
    } catch (const InvalidInput&) {
    }
    note(t2, hd, r.t, hd >= -kInvarianceTol);
    const double e_hat = (r.x - r.c).norm() / s.r_c;
    note(t4, 1.0 - e_hat, r.t, e_hat < 1.0);
  }
  if (trace.records.empty() || trace.records.back().t < s.t_f() - 0.5 * trace.dt) {
    t5.evaluable = false;
    t5.passed = false;
  } else {
    const auto& last = trace.records.back();
    const double margin = s.target.radius - (last.x - s.target.center).norm();
    note(t5, margin, last.t, margin >= 0);
  }
  return {{t1, t2, t3, t4, t5}};
}

}  // namespace vcz
