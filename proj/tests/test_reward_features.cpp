#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "irlteach/common.hpp"
#include "irlteach/reward_features.hpp"
#include "support.hpp"

using namespace irlteach;
using irlteach::test::spec;

namespace {

Environment short_env(Goal goal, int offset, Lane lane, std::size_t horizon) {
  EnvironmentConfig c;
  c.horizon = horizon;
  return instantiate(spec(goal, offset, lane, 50), c);
}

Trajectory straight(const Environment& env, double v) {
  Trajectory t;
  t.dt = env.dt;
  VehicleState s = env.robot_start;
  s.v = v;
  for (std::size_t i = 0; i <= env.horizon; ++i) {
    t.states.push_back(s);
    s.y += v * env.dt;
  }
  t.controls.resize(env.horizon);
  return t;
}

// Term-by-term features with an explicit inverse covariance.
FeatureVector oracle_features(const Trajectory& tr, const Environment& env, double gamma) {
  const double w = env.lane_width;
  const double smaj = 2.0 * w, smin = 0.5 * w;
  FeatureVector f;
  const auto& s = tr.states;
  const auto& o = env.other_car_states;
  const std::size_t T = s.size() - 1;
  for (std::size_t t = 0; t <= T; ++t) {
    const double g = std::pow(gamma, static_cast<double>(t));
    const double h = o[t].heading;
    // Sigma = R diag(smaj^2, smin^2) R^T
    const double c = std::cos(h), sn = std::sin(h);
    const double a = c * c * smaj * smaj + sn * sn * smin * smin;
    const double b = c * sn * (smaj * smaj - smin * smin);
    const double d = sn * sn * smaj * smaj + c * c * smin * smin;
    const double det = a * d - b * b;
    const double dx = s[t].x - o[t].x, dy = s[t].y - o[t].y;
    const double m = (d * dx * dx - 2 * b * dx * dy + a * dy * dy) / det;
    f[0] += g * std::exp(-0.5 * m);
    if (t < T) f[1] += g * (s[t + 1].v - s[t].v) * (s[t + 1].v - s[t].v);
    f[2] += g * (s[t].v - s[0].v) * (s[t].v - s[0].v);
    f[3] += g * std::abs(s[t].heading - s[0].heading);
    if (env.spec.goal == Goal::MergeRight) {
      const double gap = std::max(0.0, s[0].x + w - s[t].x);
      f[4] += g * gap * gap;
    }
  }
  if (env.spec.goal == Goal::DriveForward) f[4] = std::max(0.0, s[0].y + 1000.0 - s[T].y);
  return f;
}

Trajectory fixture(const Environment& env) {
  Trajectory t;
  t.dt = env.dt;
  t.states = {{0.0, 0.0, 1.5708, 50.0, 0.0},
              {0.3, 5.0, 1.6, 52.0, 0.1},
              {1.1, 10.3, 1.7, 51.0, 0.2},
              {2.4, 15.4, 1.65, 49.5, 0.1}};
  t.controls.resize(3);
  return t;
}

}  // namespace

TEST(Features, StraightFarAway) {
  const Environment env = instantiate(spec(Goal::DriveForward, 240, Lane::Left, 80));
  const FeatureVector f = feature_vector(straight(env, 50.0), env);
  EXPECT_EQ(f.accel_sq(), 0.0);
  EXPECT_EQ(f.speed_dev_sq(), 0.0);
  EXPECT_EQ(f.turning(), 0.0);
  EXPECT_LT(f.proximity(), 1e-6);
}

TEST(Features, CoincidentCarsGiveFullProximity) {
  Environment env = short_env(Goal::DriveForward, 100, Lane::Center, 50);
  Trajectory t;
  t.dt = env.dt;
  t.states = env.other_car_states;
  t.controls.resize(env.horizon);
  EXPECT_DOUBLE_EQ(feature_vector(t, env).proximity(), 51.0);
}

TEST(Features, HandBuiltFixtureMatchesTermOracle) {
  for (Goal goal : {Goal::MergeRight, Goal::DriveForward}) {
    const Environment env = short_env(goal, 100, Lane::Right, 3);
    const Trajectory t = fixture(env);
    for (double gamma : {1.0, 0.9}) {
      FeatureParams p;
      p.discount = gamma;
      const FeatureVector got = feature_vector(t, env, p);
      const FeatureVector want = oracle_features(t, env, gamma);
      for (std::size_t k = 0; k < kNumFeatures; ++k) {
        EXPECT_NEAR(got[k], want[k], 1e-12 * std::max(1.0, std::abs(want[k]))) << k;
      }
    }
  }
}

TEST(Features, LengthMismatchRejected) {
  const Environment env = short_env(Goal::MergeRight, 100, Lane::Right, 3);
  Trajectory t = fixture(env);
  t.states.pop_back();
  EXPECT_THROW(feature_vector(t, env), DomainError);
}

TEST(Normalize, SingleTrajectoryIsZero) {
  FeatureVector f;
  f.values = {3, 4, 5, 6, 7};
  const auto n = normalize_features(std::vector<FeatureVector>{f});
  EXPECT_EQ(n[0][0], 3.0);
  for (std::size_t k = 1; k < kNumFeatures; ++k) EXPECT_EQ(n[0][k], 0.0);
}

TEST(Normalize, TwoValues) {
  FeatureVector a, b;
  a[1] = 2;
  b[1] = 6;
  const auto n = normalize_features(std::vector<FeatureVector>{a, b});
  EXPECT_EQ(n[0][1], 0.0);
  EXPECT_EQ(n[1][1], 1.0);
}

TEST(NormalizeProperty, MinZeroMaxOneAndIdempotent) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FeatureVector> raw(10);
    for (FeatureVector& f : raw) {
      for (double& v : f.values) v = rng.uniform(0.0, 100.0);
    }
    const auto n = normalize_features(raw);
    for (std::size_t k = 1; k < kNumFeatures; ++k) {
      double lo = 1e9, hi = -1e9;
      for (const FeatureVector& f : n) {
        lo = std::min(lo, f[k]);
        hi = std::max(hi, f[k]);
      }
      EXPECT_EQ(lo, 0.0);
      EXPECT_EQ(hi, 1.0);
    }
    for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_EQ(n[i][0], raw[i][0]);
    const auto twice = normalize_features(n);
    for (std::size_t i = 0; i < n.size(); ++i) {
      for (std::size_t k = 1; k < kNumFeatures; ++k) EXPECT_NEAR(twice[i][k], n[i][k], 1e-15);
    }
  }
}

TEST(Reward, Examples) {
  FeatureVector f;
  f.values = {1, 2, 3, 4, 5};
  EXPECT_EQ(reward(ThetaVector{}, f), 0.0);
  FeatureVector e0;
  e0[0] = 1.0;
  EXPECT_EQ(reward(kThetaStar, e0), -64.0);
}

TEST(RewardProperty, MatchesSumAndIsLinear) {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    ThetaVector t1, t2;
    FeatureVector f;
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
      t1.w[k] = rng.uniform(-64, 0);
      t2.w[k] = rng.uniform(-64, 0);
      f[k] = rng.uniform(0, 50);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < kNumFeatures; ++k) sum += t1.w[k] * f[k];
    EXPECT_NEAR(reward(t1, f), sum, 1e-10 * std::max(1.0, std::abs(sum)));
    const double a = rng.uniform(0, 3), b = rng.uniform(0, 3);
    ThetaVector mix;
    for (std::size_t k = 0; k < kNumFeatures; ++k) mix.w[k] = a * t1.w[k] + b * t2.w[k];
    const double lhs = reward(mix, f);
    const double rhs = a * reward(t1, f) + b * reward(t2, f);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(RewardProperty, ArgmaxScaleInvariant) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<FeatureVector> set(12);
    for (FeatureVector& f : set) {
      for (double& v : f.values) v = rng.uniform(0, 1);
    }
    ThetaVector t;
    for (double& w : t.w) w = rng.uniform(-5, 0);
    const double c = rng.uniform(0.1, 10.0);
    ThetaVector ct = t;
    for (double& w : ct.w) w *= c;
    auto argmax = [&](const ThetaVector& th) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < set.size(); ++i) {
        if (reward(th, set[i]) > reward(th, set[best])) best = i;
      }
      return best;
    };
    EXPECT_EQ(argmax(t), argmax(ct));
  }
}

TEST(ProximityProperty, SwapSymmetry) {
  Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const double dx = rng.uniform(-20, 20), dy = rng.uniform(-20, 20), h = rng.uniform(-3, 3);
    EXPECT_DOUBLE_EQ(proximity_kernel(dx, dy, h, 8, 2), proximity_kernel(-dx, -dy, h, 8, 2));
  }
  EXPECT_EQ(proximity_kernel(0, 0, 1.0, 8, 2), 1.0);
}
