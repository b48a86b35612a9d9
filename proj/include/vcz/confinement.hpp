#pragma once

// Approximation-free confinement law keeping x inside the open ball B(c, r_c):
//
//   u = -k * zeta(|e| / r_c) * e / |e|,   e = x - c,   u = 0 at e = 0
//   zeta(s) = ln((1 + s) / (1 - s))
//
// Only the sign of k is tied to the plant (sign of (g + g')/2); nothing else
// about f, g or the disturbance is used.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "vcz/errors.hpp"
#include "vcz/expr.hpp"

namespace vcz {

struct ConfinementLaw {
  double k = 10.0;
  double r_c = 0.5;
  double epsilon_sat = 1e-9;

  void check() const {
    if (k == 0.0 || !std::isfinite(k)) throw InvalidInput("confinement: gain k must be nonzero and finite");
    if (!(r_c > 0)) throw InvalidInput("confinement: r_c must be positive");
    if (!(epsilon_sat > 0 && epsilon_sat < 1)) throw InvalidInput("confinement: epsilon_sat must lie in (0, 1)");
  }
  double zero_tol() const { return 1e-12 * r_c; }

  friend bool operator==(const ConfinementLaw&, const ConfinementLaw&) = default;
};

struct ErrorState {
  Eigen::VectorXd e;
  double e_hat = 0.0;
};

inline ErrorState error_state(const Eigen::VectorXd& x, const Eigen::VectorXd& c, double r_c) {
  ErrorState s{x - c, 0.0};
  s.e_hat = s.e.norm() / r_c;
  return s;
}

/// ln((1 + s)/(1 - s)), evaluated as 2 atanh(s); clamped at s = 1 - epsilon_sat.
inline double zeta(double e_hat, double epsilon_sat) {
  if (!(e_hat >= 0)) throw InvalidInput("zeta: normalized error must be >= 0");
  return 2.0 * std::atanh(std::min(e_hat, 1.0 - epsilon_sat));
}

inline Eigen::VectorXd confinement_control(const Eigen::VectorXd& x, const Eigen::VectorXd& c,
                                           const ConfinementLaw& law) {
  if (x.size() != c.size()) throw InvalidInput("confinement_control: dimension mismatch");
  const Eigen::VectorXd e = x - c;
  const double norm = e.norm();
  const double e_hat = norm / law.r_c;
  if (e_hat >= 1.0)
    throw ConfinementBreach("state left the confinement zone: |x - c| / r_c = " + format_double(e_hat), e_hat);
  if (norm <= law.zero_tol()) return Eigen::VectorXd::Zero(x.size());
  return (-law.k * zeta(e_hat, law.epsilon_sat) / norm) * e;
}

/// Local slope 2|k|/r_c of |u| in |e| near e = 0 (zeta(s) ~ 2s + 2s^3/3).
inline double small_error_slope(const ConfinementLaw& law) { return 2.0 * std::abs(law.k) / law.r_c; }

}  // namespace vcz
