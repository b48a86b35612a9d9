#pragma once

// Seeded random reach-avoid scenarios in a square workspace, drawn by rejection
// sampling until validate() accepts them.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "vcz/scenario.hpp"

namespace vcz {

struct RandomScenarioOptions {
  double workspace = 12.0;  // square [0, workspace]^2
  int min_obstacles = 1;
  int max_obstacles = 3;
  double min_radius = 0.3;
  double max_radius = 1.2;
  double max_speed = 0.5;
  double moving_fraction = 0.5;
  double t_f = 10.0;
  double dt = 1e-3;
  double r_c = 0.5;
  int max_attempts = 10000;
};

/// Benchmark plant and gains; start near one corner, target near the opposite one.
inline Scenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const double w = opt.workspace;
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    Scenario s = benchmark_scenario();
    s.name = "random-" + std::to_string(seed);
    s.seed = seed;
    s.r_c = opt.r_c;
    s.dt = opt.dt;
    s.x0 = Eigen::Vector2d(uniform(0.05 * w, 0.25 * w), uniform(0.05 * w, 0.25 * w));
    s.target.center = Eigen::Vector2d(uniform(0.75 * w, 0.95 * w), uniform(0.75 * w, 0.95 * w));
    s.target.radius = uniform(opt.r_c + 0.3, opt.r_c + 1.0);
    const double dist = (s.x0 - s.target.center).norm();
    s.shrink = {dist + uniform(0.2, 1.0), s.target.radius - s.r_c, opt.t_f};

    s.obstacles.clear();
    const int count = std::uniform_int_distribution<int>(opt.min_obstacles, opt.max_obstacles)(rng);
    for (int j = 0; j < count; ++j) {
      const Eigen::Vector2d p(uniform(0.15 * w, 0.85 * w), uniform(0.15 * w, 0.85 * w));
      const double r = uniform(opt.min_radius, opt.max_radius);
      if (uniform(0.0, 1.0) < opt.moving_fraction) {
        const double speed = uniform(0.0, opt.max_speed);
        const double heading = uniform(0.0, 2.0 * M_PI);
        s.obstacles.push_back(Obstacle::moving(p, speed * Eigen::Vector2d(std::cos(heading), std::sin(heading)), r));
      } else {
        s.obstacles.push_back(Obstacle::fixed(p, r));
      }
    }
    if (validate(s, 201).all_mandatory_passed()) return s;
  }
  throw InvalidInput("random_scenario: no valid scenario after max_attempts draws");
}

}  // namespace vcz
