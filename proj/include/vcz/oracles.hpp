#pragma once

// Independent numerical oracles for the test suites: central finite differences
// for barrier derivatives and seeded uniform samples on spheres.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vcz/errors.hpp"

namespace vcz {

struct FdConfig {
  double step = 1e-6;
  // Time domain of the field. Central differences that would leave it switch to the
  // second-order one-sided stencil.
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
};

struct FdGradient {
  Eigen::VectorXd grad;
  double dt = 0.0;
};

using ScalarField = std::function<double(const Eigen::VectorXd&, double)>;

inline FdGradient fd_gradient(const ScalarField& field, const Eigen::VectorXd& c, double t, const FdConfig& cfg = {}) {
  if (!(cfg.step > 0)) throw InvalidInput("fd_gradient: step must be positive");
  const double h = cfg.step;
  FdGradient out{Eigen::VectorXd(c.size()), 0.0};
  Eigen::VectorXd cp = c, cm = c;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    cp[i] = c[i] + h;
    cm[i] = c[i] - h;
    out.grad[i] = (field(cp, t) - field(cm, t)) / (2.0 * h);
    cp[i] = cm[i] = c[i];
  }
  if (t - h < cfg.t_min) {
    out.dt = (-3.0 * field(c, t) + 4.0 * field(c, t + h) - field(c, t + 2.0 * h)) / (2.0 * h);
  } else if (t + h > cfg.t_max) {
    out.dt = (3.0 * field(c, t) - 4.0 * field(c, t - h) + field(c, t - 2.0 * h)) / (2.0 * h);
  } else {
    out.dt = (field(c, t + h) - field(c, t - h)) / (2.0 * h);
  }
  return out;
}

/// `count` seed-reproducible points uniformly distributed on the sphere ||p - c|| = r.
inline std::vector<Eigen::VectorXd> sphere_sample(const Eigen::VectorXd& c, double r, int count, std::uint64_t seed) {
  if (!(r > 0) || count < 1 || c.size() < 1) throw InvalidInput("sphere_sample: need r > 0, count >= 1, n >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(count));
  Eigen::VectorXd dir(c.size());
  while (static_cast<int>(pts.size()) < count) {
    for (Eigen::Index i = 0; i < c.size(); ++i) dir[i] = normal(rng);
    const double norm = dir.norm();
    if (norm < 1e-8) continue;
    pts.push_back(c + (r / norm) * dir);
  }
  return pts;
}

}  // namespace vcz
