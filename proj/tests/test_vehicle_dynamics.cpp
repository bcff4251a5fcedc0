#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "irlteach/common.hpp"
#include "irlteach/vehicle_dynamics.hpp"

using namespace irlteach;

namespace {

// Fine-step reference integrator of the same continuous model.
VehicleState integrate_fine(VehicleState s, const ControlInput& u, double duration, double h,
                            double L) {
  const std::size_t n = static_cast<std::size_t>(std::llround(duration / h));
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = s.v * std::cos(s.heading);
    const double dy = s.v * std::sin(s.heading);
    const double dh = s.v / L * std::tan(s.alpha);
    s.x += h * dx;
    s.y += h * dy;
    s.heading += h * dh;
    s.v += h * u.u2;
    s.alpha += h * u.u1;
  }
  return s;
}

double norm(const VehicleState& s) {
  double acc = 0.0;
  for (double v : s.as_array()) acc += v * v;
  return std::sqrt(acc);
}

double distance(const VehicleState& a, const VehicleState& b) {
  double acc = 0.0;
  const auto x = a.as_array();
  const auto y = b.as_array();
  for (std::size_t i = 0; i < 5; ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(acc);
}

}  // namespace

TEST(Step, ZeroVelocityIsFixedPoint) {
  const VehicleState s{};
  EXPECT_EQ(step(s, {0.0, 0.0}, 0.1), s);
}

TEST(Step, StraightLineMotion) {
  const VehicleState n = step({0, 0, 0, 10, 0}, {0, 0}, 0.1);
  EXPECT_DOUBLE_EQ(n.x, 1.0);
  EXPECT_DOUBLE_EQ(n.y, 0.0);
  EXPECT_DOUBLE_EQ(n.heading, 0.0);
  EXPECT_DOUBLE_EQ(n.v, 10.0);
  EXPECT_DOUBLE_EQ(n.alpha, 0.0);
}

TEST(Step, SteeringMatchesFineIntegrator) {
  const VehicleState s{0, 0, 0, 10, 0.1};
  const VehicleState coarse = step(s, {0, 0}, 0.1);
  const VehicleState fine = integrate_fine(s, {0, 0}, 0.1, 1e-4, 3.0);
  EXPECT_LE(distance(coarse, fine) / norm(fine), 0.01);
  EXPECT_NEAR(coarse.heading, fine.heading, 1e-9);
}

TEST(Step, ControlsFollowTheirDefinitions) {
  const VehicleState n = step({0, 0, 0, 5, 0}, {1.0, 2.0}, 0.1);
  EXPECT_DOUBLE_EQ(n.v, 5.2);
  EXPECT_DOUBLE_EQ(n.alpha, 0.1);
}

TEST(Step, ClampsSteeringAndSpeed) {
  DynamicsParams p;
  const VehicleState a = step({0, 0, 0, 1, 0.49}, {2.0, 0.0}, 0.1, p);
  EXPECT_DOUBLE_EQ(a.alpha, p.alpha_max);
  const VehicleState b = step({0, 0, 0, 0.5, 0}, {0.0, -10.0}, 0.1, p);
  EXPECT_DOUBLE_EQ(b.v, 0.0);
}

TEST(Step, RejectsBadInput) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(step({nan, 0, 0, 0, 0}, {0, 0}, 0.1), DomainError);
  EXPECT_THROW(step({}, {0, nan}, 0.1), DomainError);
  EXPECT_THROW(step({}, {0, 0}, 0.0), DomainError);
  EXPECT_THROW(step({}, {0, 0}, 0.1, DynamicsParams{0.0, 0.5, 2.0, 10.0}), DomainError);
  EXPECT_THROW(step({}, {2.5, 0}, 0.1), DomainError);
  EXPECT_THROW(step({}, {0, 11.0}, 0.1), DomainError);
}

TEST(Rollout, ZeroControlsFromRest) {
  const std::vector<ControlInput> u(10);
  const Trajectory t = rollout({}, u, 0.1);
  ASSERT_EQ(t.states.size(), 11u);
  for (const VehicleState& s : t.states) EXPECT_EQ(s, VehicleState{});
}

TEST(Rollout, ConstantAcceleration) {
  const std::vector<ControlInput> u(10, ControlInput{0.0, 1.0});
  const Trajectory t = rollout({}, u, 0.1);
  EXPECT_NEAR(t.states.back().v, 1.0, 1e-12);
}

TEST(Rollout, IsFoldOfStep) {
  Rng rng(5);
  std::vector<ControlInput> u;
  for (int i = 0; i < 30; ++i) u.push_back({rng.uniform(-2, 2), rng.uniform(-10, 10)});
  const VehicleState s0{0, 0, 1.5, 40, 0};
  const Trajectory t = rollout(s0, u, 0.1);
  VehicleState s = s0;
  ASSERT_EQ(t.states.size(), u.size() + 1);
  EXPECT_EQ(t.states[0], s0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    s = step(s, u[i], 0.1);
    EXPECT_EQ(t.states[i + 1], s);
  }
  EXPECT_EQ(t.controls, u);
}

TEST(Rollout, EmptyControlsRejected) {
  EXPECT_THROW(rollout({}, std::vector<ControlInput>{}, 0.1), DomainError);
}

TEST(Rollout, Deterministic) {
  std::vector<ControlInput> u(20, ControlInput{0.3, 1.5});
  EXPECT_EQ(rollout({0, 0, 0, 20, 0}, u, 0.1), rollout({0, 0, 0, 20, 0}, u, 0.1));
}

TEST(RolloutProperty, StraightLineConservation) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const VehicleState s0{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-3, 3),
                          rng.uniform(0, 80), 0.0};
    const std::vector<ControlInput> u(1 + rng.below(60));
    const Trajectory t = rollout(s0, u, 0.1);
    for (const VehicleState& s : t.states) {
      EXPECT_EQ(s.heading, s0.heading);
      EXPECT_EQ(s.v, s0.v);
    }
  }
}

TEST(RolloutProperty, EulerErrorShrinksWithStep) {
  // Final-state error against a very fine solution drops roughly linearly in dt.
  const VehicleState s0{0, 0, 0, 20, 0};
  const ControlInput u{0.2, 1.0};
  const double duration = 2.0;
  const VehicleState ref = integrate_fine(s0, u, duration, 1e-5, 3.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double dt : {0.1, 0.05, 0.025}) {
    const std::size_t n = static_cast<std::size_t>(std::llround(duration / dt));
    const Trajectory t = rollout(s0, std::vector<ControlInput>(n, u), dt);
    const double err = distance(t.states.back(), ref);
    EXPECT_LT(err, prev);
    if (std::isfinite(prev)) {
      EXPECT_LT(err / prev, 0.7);
    }
    prev = err;
  }
}
