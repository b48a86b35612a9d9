#pragma once

// True control-affine plant  dx/dt = f(x) + g(x) u + w(t).
//
// Only the simulator evaluates a PlantModel. Controllers see the plant
// through the declared sign class of (g + g')/2 and nothing else.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "vcz/errors.hpp"
#include "vcz/expr.hpp"

namespace vcz {

enum class SignClass { PositiveDefinite, NegativeDefinite };

inline const char* to_string(SignClass s) {
  return s == SignClass::PositiveDefinite ? "positive_definite" : "negative_definite";
}

struct PlantModel {
  /// "benchmark", "integrator" or "expr" (user expressions).
  std::string catalog = "expr";
  Eigen::Index n = 0;
  VectorField drift;        // f(x)
  MatrixField input;        // g(x), n x n
  VectorField disturbance;  // w(t), expressions in t only
  SignClass sign_class = SignClass::PositiveDefinite;

  void check() const {
    if (n < 1) throw InvalidInput("plant: dimension must be >= 1");
    if (drift.size() != n) throw InvalidInput("plant: drift has wrong length");
    if (input.rows != n || input.cols != n || static_cast<Eigen::Index>(input.entries.size()) != n * n)
      throw InvalidInput("plant: input map must be n x n");
    if (disturbance.size() != n) throw InvalidInput("plant: disturbance has wrong length");
    if (drift.max_var_index() >= n || input.max_var_index() >= n)
      throw InvalidInput("plant: expression references a state beyond dimension n");
    if (disturbance.max_var_index() >= 0) throw InvalidInput("plant: disturbance may depend on t only");
  }

  Eigen::VectorXd f(const Eigen::VectorXd& x) const { return drift.eval(x, 0.0); }
  Eigen::MatrixXd g(const Eigen::VectorXd& x) const { return input.eval(x, 0.0); }
  Eigen::VectorXd omega(double t) const { return disturbance.eval(Eigen::VectorXd(), t); }

  friend bool operator==(const PlantModel&, const PlantModel&) = default;
};

inline Eigen::VectorXd plant_derivative(const PlantModel& model, const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& u, double t) {
  if (x.size() != model.n || u.size() != model.n) throw InvalidInput("plant_derivative: dimension mismatch");
  return model.f(x) + model.g(x) * u + model.omega(t);
}

/// f = [5 sin(x1 x2), 5 cos(x1 x2)], g = diag(0.8, 0.5), w = [0.4 cos t, 0.4 sin t].
inline PlantModel benchmark_plant() {
  PlantModel p;
  p.catalog = "benchmark";
  p.n = 2;
  p.drift.comps = {Expr::parse("(* 5 (sin (* x1 x2)))"), Expr::parse("(* 5 (cos (* x1 x2)))")};
  p.input = MatrixField::constant(Eigen::Vector2d(0.8, 0.5).asDiagonal().toDenseMatrix());
  p.disturbance.comps = {Expr::parse("(* 0.4 (cos t))"), Expr::parse("(* 0.4 (sin t))")};
  p.sign_class = SignClass::PositiveDefinite;
  return p;
}

/// dx/dt = u in n dimensions.
inline PlantModel integrator_plant(Eigen::Index n) {
  if (n < 1) throw InvalidInput("integrator plant: n must be >= 1");
  PlantModel p;
  p.catalog = "integrator";
  p.n = n;
  p.drift = VectorField::constant(Eigen::VectorXd::Zero(n));
  p.input = MatrixField::constant(Eigen::MatrixXd::Identity(n, n));
  p.disturbance = VectorField::constant(Eigen::VectorXd::Zero(n));
  return p;
}

struct SampleBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Smallest eigenvalue of (g + g')/2, multiplied by the declared sign, over random samples in
/// the box. Positive means the declaration holds at every sample.
inline double sign_class_margin(const PlantModel& model, const SampleBox& box, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double sgn = model.sign_class == SignClass::PositiveDefinite ? 1.0 : -1.0;
  double worst = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x(model.n);
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < model.n; ++i) x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    const Eigen::MatrixXd g = model.g(x);
    const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = sgn * eig.eigenvalues();
    worst = std::min(worst, ev.minCoeff());
  }
  return worst;
}

/// Largest sampled difference quotient ||f(x) - f(y)|| / ||x - y|| over random pairs in the box.
inline double sampled_lipschitz(const PlantModel& model, const SampleBox& box, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  Eigen::VectorXd x(model.n), y(model.n);
  for (int s = 0; s < pairs; ++s) {
    for (Eigen::Index i = 0; i < model.n; ++i) {
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
      y[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    }
    const double dist = (x - y).norm();
    if (dist < 1e-12) continue;
    worst = std::max(worst, (model.f(x) - model.f(y)).norm() / dist);
  }
  return worst;
}

}  // namespace vcz
