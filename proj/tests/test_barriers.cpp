#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "vcz/barriers.hpp"
#include "vcz/oracles.hpp"

using namespace vcz;

namespace {

const ShrinkSchedule kSchedule{15.0, 0.5, 10.0};
const Obstacle kStatic = Obstacle::fixed(Eigen::Vector2d(1.5, 2.0), 0.5);
const Obstacle kMoving = Obstacle::moving(Eigen::Vector2d(5.0, 5.0), Eigen::Vector2d(0.4, -0.4), 1.5);

Obstacle wobbling() {
  return Obstacle::custom(
      VectorField{{Expr::parse("(+ 3 (* 2 (sin t)))"), Expr::parse("(- 4 (* 0.5 (cos (* 3 t))))")}}, 0.8);
}

}  // namespace

TEST(ShrinkSchedule, Endpoints) {
  EXPECT_DOUBLE_EQ(radius_at(kSchedule, 0.0), 15.0);
  EXPECT_DOUBLE_EQ(radius_at(kSchedule, 10.0), 0.5);
  EXPECT_DOUBLE_EQ(radius_at(kSchedule, 5.0), 7.75);
  EXPECT_DOUBLE_EQ(rate_of(kSchedule), -1.45);
}

TEST(ShrinkSchedule, RejectsTimesOutsideHorizon) {
  EXPECT_THROW(radius_at(kSchedule, -0.1), InvalidInput);
  EXPECT_THROW(radius_at(kSchedule, 10.1), InvalidInput);
}

TEST(ShrinkSchedule, Nonincreasing) {
  double prev = radius_at(kSchedule, 0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double r = radius_at(kSchedule, 0.01 * i);
    EXPECT_LE(r, prev);
    prev = r;
  }
}

TEST(Avoidance, StaticObstacleAtOrigin) {
  const auto be = eval_avoidance(Eigen::Vector2d(0, 0), 0.0, kStatic, 0.5);
  EXPECT_DOUBLE_EQ(be.value, 5.25);
  EXPECT_DOUBLE_EQ(be.grad_c[0], -3.0);
  EXPECT_DOUBLE_EQ(be.grad_c[1], -4.0);
  EXPECT_DOUBLE_EQ(be.dt, 0.0);
}

TEST(Avoidance, ZeroOnTightenedBoundary) {
  EXPECT_DOUBLE_EQ(eval_avoidance(Eigen::Vector2d(2.5, 2.0), 0.0, kStatic, 0.5).value, 0.0);
}

TEST(Avoidance, MovingObstacleAtOrigin) {
  const auto be = eval_avoidance(Eigen::Vector2d(0, 0), 0.0, kMoving, 0.5);
  EXPECT_DOUBLE_EQ(be.value, 46.0);
  EXPECT_DOUBLE_EQ(be.grad_c[0], -10.0);
  EXPECT_DOUBLE_EQ(be.grad_c[1], -10.0);
  EXPECT_DOUBLE_EQ(be.dt, 0.0);
}

TEST(Reach, BenchmarkStart) {
  const auto be = eval_reach(Eigen::Vector2d(0, 0), 0.0, Eigen::Vector2d(10, 10), kSchedule);
  EXPECT_DOUBLE_EQ(be.value, 25.0);
  EXPECT_DOUBLE_EQ(be.grad_c[0], 20.0);
  EXPECT_DOUBLE_EQ(be.grad_c[1], 20.0);
  EXPECT_DOUBLE_EQ(be.dt, -43.5);
}

TEST(Reach, AtTargetCenterAndOnBoundary) {
  const Eigen::Vector2d b(10, 10);
  for (double t : {0.0, 3.0, 10.0}) {
    const auto be = eval_reach(b, t, b, kSchedule);
    EXPECT_DOUBLE_EQ(be.value, std::pow(radius_at(kSchedule, t), 2));
    EXPECT_EQ(be.grad_c.norm(), 0.0);
  }
  const Eigen::Vector2d edge = b + Eigen::Vector2d(0.6, 0.8) * radius_at(kSchedule, 5.0);
  EXPECT_NEAR(eval_reach(edge, 5.0, b, kSchedule).value, 0.0, 1e-12);
}

TEST(ClassKappa, Linear) {
  EXPECT_DOUBLE_EQ(gamma_eval({1.0}, 5.25), 5.25);
  EXPECT_DOUBLE_EQ(gamma_eval({2.0}, -1.0), -2.0);
  EXPECT_DOUBLE_EQ(gamma_eval({1.0}, 0.0), 0.0);
  EXPECT_THROW(gamma_eval({0.0}, 1.0), InvalidInput);
}

TEST(Obstacle, VelocityMatchesCenterPath) {
  for (const Obstacle& o : {kStatic, kMoving, wobbling()}) {
    for (double t : {0.5, 2.0, 7.3}) {
      const double h = 1e-4;
      const Eigen::VectorXd fd = (o.center(t + h) - o.center(t - h)) / (2 * h);
      EXPECT_LE(fixtures::rel_error(o.center_velocity(t), fd), 1e-6) << to_string(o.kind) << " t=" << t;
    }
  }
}

TEST(Barriers, FiniteDifferenceConsistency) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-2.0, 12.0), time(0.0, 10.0);
  const FdConfig cfg{1e-6, 0.0, 10.0};
  for (const Obstacle& o : {kStatic, kMoving, wobbling()}) {
    const ScalarField field = [&](const Eigen::VectorXd& c, double t) { return eval_avoidance(c, t, o, 0.5).value; };
    for (int k = 0; k < 100; ++k) {
      const Eigen::Vector2d c(pos(rng), pos(rng));
      const double t = time(rng);
      const auto be = eval_avoidance(c, t, o, 0.5);
      const auto fd = fd_gradient(field, c, t, cfg);
      EXPECT_LE(fixtures::rel_error(fd.grad, be.grad_c), 1e-5);
      EXPECT_LE(fixtures::rel_error(fd.dt, be.dt), 1e-5);
    }
  }
  const Eigen::Vector2d b(10, 10);
  const ScalarField reach = [&](const Eigen::VectorXd& c, double t) { return eval_reach(c, t, b, kSchedule).value; };
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector2d c(pos(rng), pos(rng));
    const double t = k == 0 ? 0.0 : k == 1 ? 10.0 : time(rng);
    const auto be = eval_reach(c, t, b, kSchedule);
    const auto fd = fd_gradient(reach, c, t, cfg);
    EXPECT_LE(fixtures::rel_error(fd.grad, be.grad_c), 1e-5);
    EXPECT_LE(fixtures::rel_error(fd.dt, be.dt), 1e-5);
  }
}

TEST(Barriers, SignSemantics) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI), frac(0.0, 0.999);
  const double r_c = 0.5;
  for (int k = 0; k < 200; ++k) {
    const double t = 10.0 * frac(rng);
    const double a = angle(rng);
    const Eigen::Vector2d dir(std::cos(a), std::sin(a));
    for (const Obstacle& o : {kStatic, kMoving}) {
      const double R = o.radius + r_c;
      EXPECT_LT(eval_avoidance(o.center(t) + frac(rng) * R * dir, t, o, r_c).value, 0.0);
      EXPECT_NEAR(eval_avoidance(o.center(t) + R * dir, t, o, r_c).value, 0.0, 1e-12);
      EXPECT_GT(eval_avoidance(o.center(t) + (R + 0.01 + frac(rng)) * dir, t, o, r_c).value, 0.0);
    }
    const Eigen::Vector2d b(10, 10);
    const double r = radius_at(kSchedule, t);
    EXPECT_GT(eval_reach(b + frac(rng) * r * dir, t, b, kSchedule).value, 0.0);
    EXPECT_NEAR(eval_reach(b + r * dir, t, b, kSchedule).value, 0.0, 1e-10);
    EXPECT_LT(eval_reach(b + (r + 0.01 + frac(rng)) * dir, t, b, kSchedule).value, 0.0);
  }
}
