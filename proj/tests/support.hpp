#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "vcz/qp.hpp"

namespace vcz::fixtures {

/// m = 2, d in 1..5, H = L'L + 0.1 I, rows built around a known feasible point.
struct RandomQp {
  QpProblem problem;
  Eigen::VectorXd feasible;
};

inline RandomQp random_qp(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> rows(1, 5);
  QpProblem p;
  Eigen::MatrixXd L(2, 2);
  for (int i = 0; i < 4; ++i) L.data()[i] = normal(rng);
  p.H = L.transpose() * L + 0.1 * Eigen::MatrixXd::Identity(2, 2);
  p.F = Eigen::Vector2d(normal(rng), normal(rng));
  const int d = rows(rng);
  const Eigen::Vector2d feasible(normal(rng), normal(rng));
  p.A.resize(d, 2);
  p.b.resize(d);
  for (int j = 0; j < d; ++j) {
    p.A(j, 0) = normal(rng);
    p.A(j, 1) = normal(rng);
    p.b[j] = p.A.row(j).dot(feasible) - std::abs(normal(rng));
  }
  return {p, feasible};
}

/// Grid box half-width known to contain the minimizer without looking at any solver output:
/// a feasible point bounds the optimal cost, and strong convexity turns that into a radius
/// around the unconstrained minimizer.
inline double oracle_box(const QpProblem& p, const Eigen::VectorXd& feasible_point) {
  const Eigen::VectorXd u_unc = -p.H.llt().solve(p.F);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.H);
  const double gap = std::max(0.0, qp_cost(p, feasible_point) - qp_cost(p, u_unc));
  return u_unc.cwiseAbs().maxCoeff() + std::sqrt(2.0 * gap / eig.eigenvalues().minCoeff()) + 0.5;
}

}  // namespace vcz::fixtures

namespace vcz::fixtures {

/// |a - b| / max(|b|, 1): relative error with an absolute floor near zero.
inline double rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1.0);
}
inline double rel_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1.0); }

}  // namespace vcz::fixtures
