#pragma once

// Avoidance and reach barrier functions for the confinement-zone center, the
// affine shrinking-radius schedule and the linear class-K relaxation.
//
//   avoidance:  h_j(c, t) = ||c - b_j(t)||^2 - (r_j + r_c)^2
//   reach:      h_d(c, t) = r_r(t)^2 - ||c - b_R||^2

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "vcz/errors.hpp"
#include "vcz/expr.hpp"

namespace vcz {

enum class ObstacleKind { Static, Linear, Custom };

inline const char* to_string(ObstacleKind k) {
  switch (k) {
    case ObstacleKind::Static: return "static";
    case ObstacleKind::Linear: return "linear";
    case ObstacleKind::Custom: return "custom";
  }
  return "?";
}

/// Open ball B(b(t), radius). Static and linear paths have analytic velocity;
/// custom paths are time expressions differentiated by central differences.
struct Obstacle {
  ObstacleKind kind = ObstacleKind::Static;
  Eigen::VectorXd origin;    // static/linear: b(0)
  Eigen::VectorXd velocity;  // linear: constant db/dt
  VectorField path;          // custom: b(t), expressions in t only
  double radius = 1.0;

  static constexpr double kFdStep = 1e-5;

  static Obstacle fixed(Eigen::VectorXd center, double r) {
    Obstacle o;
    o.kind = ObstacleKind::Static;
    o.origin = std::move(center);
    o.velocity = Eigen::VectorXd::Zero(o.origin.size());
    o.radius = r;
    return o;
  }
  static Obstacle moving(Eigen::VectorXd p0, Eigen::VectorXd v, double r) {
    if (p0.size() != v.size()) throw InvalidInput("obstacle: origin and velocity dimensions differ");
    Obstacle o;
    o.kind = ObstacleKind::Linear;
    o.origin = std::move(p0);
    o.velocity = std::move(v);
    o.radius = r;
    return o;
  }
  static Obstacle custom(VectorField p, double r) {
    if (p.max_var_index() >= 0) throw InvalidInput("obstacle path may depend on t only");
    Obstacle o;
    o.kind = ObstacleKind::Custom;
    o.path = std::move(p);
    o.radius = r;
    return o;
  }

  Eigen::Index dim() const { return kind == ObstacleKind::Custom ? path.size() : origin.size(); }

  Eigen::VectorXd center(double t) const {
    switch (kind) {
      case ObstacleKind::Static: return origin;
      case ObstacleKind::Linear: return origin + t * velocity;
      case ObstacleKind::Custom: return path.eval(Eigen::VectorXd(), t);
    }
    return origin;
  }

  Eigen::VectorXd center_velocity(double t) const {
    switch (kind) {
      case ObstacleKind::Static: return Eigen::VectorXd::Zero(origin.size());
      case ObstacleKind::Linear: return velocity;
      case ObstacleKind::Custom:
        return (path.eval(Eigen::VectorXd(), t + kFdStep) - path.eval(Eigen::VectorXd(), t - kFdStep)) /
               (2.0 * kFdStep);
    }
    return velocity;
  }

  friend bool operator==(const Obstacle& a, const Obstacle& b) {
    if (a.kind != b.kind || a.radius != b.radius) return false;
    if (a.kind == ObstacleKind::Custom) return a.path == b.path;
    return same_values(a.origin, b.origin) && (a.kind == ObstacleKind::Static || same_values(a.velocity, b.velocity));
  }
};

/// Closed target ball B(center, radius).
struct TargetSet {
  Eigen::VectorXd center;
  double radius = 1.0;
  friend bool operator==(const TargetSet& a, const TargetSet& b) {
    return a.radius == b.radius && same_values(a.center, b.center);
  }
};

/// r_r(t) = (r_end - r_start) t / t_f + r_start on [0, t_f].
struct ShrinkSchedule {
  double r_start = 1.0;
  double r_end = 1.0;
  double t_f = 1.0;
  friend bool operator==(const ShrinkSchedule&, const ShrinkSchedule&) = default;
};

// Relative slack on the schedule domain so that t_f computed as a sum of steps is accepted.
inline constexpr double kTimeSlack = 1e-9;

inline double radius_at(const ShrinkSchedule& s, double t) {
  if (!(s.t_f > 0)) throw InvalidInput("shrink schedule: t_f must be positive");
  if (t < -kTimeSlack * s.t_f || t > s.t_f * (1.0 + kTimeSlack))
    throw InvalidInput("shrink schedule: t = " + format_double(t) + " outside [0, " + format_double(s.t_f) + "]");
  return (s.r_end - s.r_start) * t / s.t_f + s.r_start;
}

inline double rate_of(const ShrinkSchedule& s) { return (s.r_end - s.r_start) / s.t_f; }

struct BarrierEval {
  double value = 0.0;
  Eigen::VectorXd grad_c;
  double dt = 0.0;
};

/// Linear extended class-K function gamma(h) = slope * h.
struct ClassKappa {
  double slope = 1.0;
  friend bool operator==(const ClassKappa&, const ClassKappa&) = default;
};

inline double gamma_eval(const ClassKappa& k, double h) {
  if (!(k.slope > 0)) throw InvalidInput("class-K slope must be positive");
  return k.slope * h;
}

inline BarrierEval eval_avoidance(const Eigen::VectorXd& c, double t, const Obstacle& obs, double r_c) {
  if (!(r_c > 0)) throw InvalidInput("eval_avoidance: r_c must be positive");
  const Eigen::VectorXd diff = c - obs.center(t);
  const double reach = obs.radius + r_c;
  return {diff.squaredNorm() - reach * reach, 2.0 * diff, -2.0 * diff.dot(obs.center_velocity(t))};
}

inline BarrierEval eval_reach(const Eigen::VectorXd& c, double t, const Eigen::VectorXd& target_center,
                              const ShrinkSchedule& s) {
  const double r = radius_at(s, t);
  const Eigen::VectorXd diff = c - target_center;
  return {r * r - diff.squaredNorm(), -2.0 * diff, 2.0 * r * rate_of(s)};
}

}  // namespace vcz
