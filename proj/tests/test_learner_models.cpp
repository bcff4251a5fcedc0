#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "irlteach/common.hpp"
#include "irlteach/learner_models.hpp"
#include "support.hpp"

using namespace irlteach;
using irlteach::test::rel_err;
using irlteach::test::spec;

namespace {

// Set with two straight candidates: hold speed and mild acceleration.
CandidateSet two_candidate_set(const Environment& env) {
  OptimizerConfig c;
  c.target_lanes = {Lane::Center};
  c.lane_change_starts = {std::nullopt};
  c.accel_levels = {0.0, 3.0};
  return candidate_set(env, c);
}

std::vector<LearnerSpec> all_kinds() {
  return {LearnerSpec::exact(),
          LearnerSpec::deterministic(Metric::Reward, 0.1),
          LearnerSpec::deterministic(Metric::Euclidean, 5.0),
          LearnerSpec{Effect::Deterministic, Metric::Strategy, 0.0},
          LearnerSpec::probabilistic(Metric::Reward, 2.0),
          LearnerSpec::probabilistic(Metric::Euclidean, 0.5),
          LearnerSpec{Effect::Probabilistic, Metric::Strategy, 1.0}};
}

struct EvidenceFixture {
  std::vector<ThetaVector> thetas;
  std::vector<EnvironmentEvidence> evidence;
};

const EvidenceFixture& fixture() {
  static const EvidenceFixture f = [] {
    EvidenceFixture out;
    out.thetas = sample_candidate_thetas(7, 41);
    for (const EnvironmentSpec& s : test::random_specs(42, 6)) {
      out.evidence.push_back(
          build_evidence(instantiate(s), out.thetas, out.thetas.size() - 1, test::quick_refining()));
    }
    return out;
  }();
  return f;
}

}  // namespace

TEST(LearnerSpec, CanonicalAndIds) {
  EXPECT_EQ(LearnerSpec::deterministic(Metric::Reward, 0.0), LearnerSpec::exact());
  EXPECT_EQ(LearnerSpec::exact().id(), "exact");
  EXPECT_EQ(LearnerSpec::probabilistic(Metric::Euclidean, 1.0).id(), "prob-euclid");
  EXPECT_THROW(LearnerSpec::probabilistic(Metric::Reward, 0.0), ConfigError);
  EXPECT_THROW(LearnerSpec::deterministic(Metric::Reward, -1.0), ConfigError);
  for (const LearnerSpec& s : all_kinds()) EXPECT_EQ(learner_from_id(s.id(), s.param), s);
  EXPECT_THROW(learner_from_id("det-fancy", 1.0), ConfigError);
  const auto std7 = standard_learners(0.1, 1.0, 10.0, 1.0);
  ASSERT_EQ(std7.size(), 7u);
  const std::vector<std::string> ids = {"exact",       "det-reward",  "det-euclid",   "det-strategy",
                                        "prob-reward", "prob-euclid", "prob-strategy"};
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(std7[i].id(), ids[i]);
}

TEST(DistanceReward, ZeroAtOwnOptimum) {
  const Environment env = instantiate(spec(Goal::MergeRight, 120, Lane::Right, 35));
  const CandidateSet set = candidate_set(env);
  for (const ThetaVector& th : sample_candidate_thetas(10, 43)) {
    EXPECT_EQ(distance_reward(th, set, set.features[optimal_index(th, set)]), 0.0);
    EXPECT_EQ(distance_reward(th, env, optimal_trajectory(th, env)), 0.0);
  }
}

TEST(DistanceReward, NonNegativeOnRandomPairs) {
  Rng rng(44);
  const auto specs = test::random_specs(45, 100);
  const auto thetas = sample_candidate_thetas(100, 46);
  for (std::size_t i = 0; i < 100; ++i) {
    const CandidateSet set = candidate_set(instantiate(specs[i]));
    const std::size_t j = rng.below(set.size());
    EXPECT_GE(distance_reward(thetas[i], set, set.features[j]), 0.0);
  }
}

TEST(DistanceReward, TwoCandidateToy) {
  const Environment env = instantiate(spec(Goal::DriveForward, 240, Lane::Left, 80));
  const CandidateSet set = two_candidate_set(env);
  ASSERT_EQ(set.size(), 2u);
  // Columns 1..4 min-max over two rows: the larger raw value maps to 1.
  std::array<std::array<double, 5>, 2> f{};
  for (std::size_t i = 0; i < 2; ++i) {
    f[i][0] = set.raw_features[i][0];
    for (std::size_t k = 1; k < 5; ++k) {
      const double a = set.raw_features[0][k], b = set.raw_features[1][k];
      f[i][k] = a == b ? 0.0 : (set.raw_features[i][k] == std::max(a, b) ? 1.0 : 0.0);
    }
  }
  const ThetaVector th = kThetaStar;
  double r0 = 0.0, r1 = 0.0;
  for (std::size_t k = 0; k < 5; ++k) {
    r0 += th.w[k] * f[0][k];
    r1 += th.w[k] * f[1][k];
  }
  const double best = std::max(r0, r1);
  EXPECT_NEAR(distance_reward(th, set, set.features[0]), best - r0, 1e-12);
  EXPECT_NEAR(distance_reward(th, set, set.features[1]), best - r1, 1e-12);
  EXPECT_GT(std::abs(r0 - r1), 0.0);
}

TEST(DistanceEuclidean, Examples) {
  const Environment env = instantiate(spec(Goal::DriveForward, 240, Lane::Left, 80));
  const CandidateSet set = candidate_set(env);
  const Trajectory& a = set.trajectories[0];
  EXPECT_EQ(distance_euclidean(a, a), 0.0);
  EXPECT_EQ(distance_euclidean(a, set.trajectories[5]), distance_euclidean(set.trajectories[5], a));

  Trajectory shifted = a;
  for (VehicleState& s : shifted.states) s.x += 4.0;
  EXPECT_NEAR(distance_euclidean(a, shifted), 4.0, 1e-12);
  EXPECT_NEAR(distance_euclidean(a, shifted, {0.5, 1, 1, 1, 1}), 2.0, 1e-12);

  Trajectory short_one = a;
  short_one.states.pop_back();
  EXPECT_THROW(distance_euclidean(a, short_one), DomainError);
}

TEST(DistanceStrategy, Examples) {
  const Environment env = instantiate(spec(Goal::MergeRight, 100, Lane::Right, 20));
  const CandidateSet set = candidate_set(env);
  std::size_t ahead = set.size(), behind = set.size();
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.labels[i].variant == StrategyVariant::MergeAhead && ahead == set.size()) ahead = i;
    if (set.labels[i].variant == StrategyVariant::MergeBehind && behind == set.size()) behind = i;
  }
  ASSERT_LT(ahead, set.size());
  ASSERT_LT(behind, set.size());
  const Trajectory& a = set.trajectories[ahead];
  const Trajectory& b = set.trajectories[behind];
  EXPECT_EQ(distance_strategy(a, a, env), 0.0);
  EXPECT_EQ(distance_strategy(a, b, env), kInfiniteDistance);
  EXPECT_EQ(distance_strategy(b, a, env), distance_strategy(a, b, env));
}

TEST(Likelihood, ThetaStarOptimumIsOneEverywhere) {
  for (const EnvironmentSpec& s : test::random_specs(47, 8)) {
    const Environment env = instantiate(s);
    const Trajectory opt = optimal_trajectory(kThetaStar, env);
    for (const LearnerSpec& spec : all_kinds()) {
      EXPECT_EQ(likelihood(spec, kThetaStar, env, opt), 1.0) << spec.id();
    }
  }
}

TEST(Likelihood, ExponentialLimits) {
  const LearnerSpec p = LearnerSpec::probabilistic(Metric::Reward, 3.0);
  EXPECT_EQ(likelihood_from_distance(p, 0.0), 1.0);
  EXPECT_NEAR(likelihood_from_distance(p, 0.5), std::exp(-1.5), 1e-15);
  const LearnerSpec flat = LearnerSpec::probabilistic(Metric::Euclidean, 1e-300);
  EXPECT_EQ(likelihood_from_distance(flat, 1e3), 1.0);
  const LearnerSpec d = LearnerSpec::deterministic(Metric::Euclidean, 2.0);
  EXPECT_EQ(likelihood_from_distance(d, 2.0), 1.0);
  EXPECT_EQ(likelihood_from_distance(d, 2.0001), 0.0);
}

TEST(LikelihoodProperty, MaxEntProportionality) {
  const auto thetas = sample_candidate_thetas(10, 48);
  for (const EnvironmentSpec& s : test::random_specs(49, 10)) {
    const CandidateSet set = candidate_set(instantiate(s));
    for (const ThetaVector& th : thetas) {
      const std::vector<double> r = test::oracle_rewards(th, set);
      // small lambda keeps the linear ratio representable
      const LearnerSpec small = LearnerSpec::probabilistic(Metric::Reward, 0.1);
      const double base = likelihood(small, th, set, 0) / std::exp(0.1 * r[0]);
      for (std::size_t j = 1; j < set.size(); ++j) {
        const double ratio = likelihood(small, th, set, j) / std::exp(0.1 * r[j]);
        EXPECT_LE(rel_err(ratio, base), 1e-10);
      }
      // log form for a large lambda: log L - lambda r is constant
      const LearnerSpec big = LearnerSpec::probabilistic(Metric::Reward, 10.0);
      const double log_base = log_likelihood(big, th, set, 0) - 10.0 * r[0];
      for (std::size_t j = 1; j < set.size(); ++j) {
        EXPECT_LE(std::abs(log_likelihood(big, th, set, j) - 10.0 * r[j] - log_base), 1e-10);
      }
    }
  }
}

TEST(LikelihoodProperty, ExactEquivalence) {
  const LearnerSpec raw_det{Effect::Deterministic, Metric::Reward, 0.0};
  const auto thetas = sample_candidate_thetas(15, 50);
  for (const EnvironmentSpec& s : test::random_specs(51, 10)) {
    const CandidateSet set = candidate_set(instantiate(s));
    for (const ThetaVector& th : thetas) {
      for (std::size_t j = 0; j < set.size(); ++j) {
        EXPECT_EQ(likelihood(raw_det, th, set, j), likelihood(LearnerSpec::exact(), th, set, j));
      }
    }
  }
}

TEST(LikelihoodProperty, Ranges) {
  const auto thetas = sample_candidate_thetas(10, 52);
  for (const EnvironmentSpec& s : test::random_specs(53, 8)) {
    const CandidateSet set = candidate_set(instantiate(s));
    for (const ThetaVector& th : thetas) {
      for (std::size_t j = 0; j < set.size(); ++j) {
        for (const LearnerSpec& spec : all_kinds()) {
          const double l = likelihood(spec, th, set, j);
          if (spec.effect == Effect::Probabilistic && spec.metric != Metric::Strategy) {
            // never eliminated; the linear value may underflow for large lambda d
            const double ll = log_likelihood(spec, th, set, j);
            EXPECT_TRUE(std::isfinite(ll));
            EXPECT_LE(ll, 0.0);
            EXPECT_EQ(l, std::exp(ll));
            EXPECT_LE(l, 1.0);
            if (ll > -700.0) {
              EXPECT_GT(l, 0.0);
            }
          } else {
            EXPECT_TRUE(l == 0.0 || l == 1.0);
          }
        }
      }
    }
  }
}

TEST(Evidence, MatchesDirectLikelihoods) {
  const EvidenceFixture& f = fixture();
  for (const EnvironmentEvidence& ev : f.evidence) {
    EXPECT_EQ(ev.demo_index, optimal_index(f.thetas.back(), ev.set));
    EXPECT_EQ(ev.target_gaps[ev.demo_index], 0.0);
    for (const LearnerSpec& spec : all_kinds()) {
      const std::vector<double> lik = ev.likelihoods(spec);
      for (std::size_t i = 0; i < f.thetas.size(); ++i) {
        EXPECT_EQ(lik[i], likelihood(spec, f.thetas[i], ev.set, ev.demo_index)) << spec.id();
      }
    }
  }
}

TEST(UpdateBelief, ExactEliminates) {
  const Environment env = instantiate(spec(Goal::MergeRight, -240, Lane::Right, 20));
  const CandidateSet set = candidate_set(env);
  const std::size_t opt_star = optimal_index(kThetaStar, set);
  ThetaVector other;
  bool found = false;
  for (const ThetaVector& th : sample_candidate_thetas(50, 54)) {
    if (distance_reward(th, set, set.features[opt_star]) > 0.0) {
      other = th;
      found = true;
      break;
    }
  }
  ASSERT_TRUE(found);
  const Belief b = Belief::uniform({other, kThetaStar});
  const Belief post = update_belief(b, env, set.trajectories[opt_star], LearnerSpec::exact());
  EXPECT_EQ(post.masses()[0], 0.0);
  EXPECT_EQ(post.masses()[1], 1.0);
  EXPECT_EQ(posterior_target_prob(post), 1.0);
}

TEST(UpdateBelief, FlatLikelihoodKeepsPrior) {
  const EvidenceFixture& f = fixture();
  const Belief b(f.thetas, {1, 2, 3, 4, 5, 6, 7, 8}, f.thetas.size() - 1);
  const Belief post =
      update_belief(b, f.evidence[0], LearnerSpec::probabilistic(Metric::Euclidean, 1e-300));
  EXPECT_EQ(post.masses(), b.prior());
}

TEST(UpdateBelief, ThreeExamplesMatchProduct) {
  const EvidenceFixture& f = fixture();
  Rng rng(55);
  std::vector<double> prior(f.thetas.size());
  for (double& p : prior) p = rng.uniform(0.1, 1.0);
  for (const LearnerSpec& spec : all_kinds()) {
    Belief b(f.thetas, prior, f.thetas.size() - 1);
    for (std::size_t e = 0; e < 3; ++e) b = update_belief(b, f.evidence[e], spec);
    for (std::size_t i = 0; i < f.thetas.size(); ++i) {
      double want = prior[i];
      for (std::size_t e = 0; e < 3; ++e) {
        want *= likelihood(spec, f.thetas[i], f.evidence[e].set, f.evidence[e].demo_index);
      }
      EXPECT_LE(rel_err(b.masses()[i], want), 1e-12);
    }
  }
}

TEST(UpdateBelief, EnvironmentOverloadAgreesWithEvidence) {
  // Without refinement both paths use the plain library plus the observation.
  const auto thetas = sample_candidate_thetas(6, 56);
  const Environment env = instantiate(spec(Goal::DriveForward, 120, Lane::Center, 30));
  const EnvironmentEvidence ev = build_evidence(env, thetas, thetas.size() - 1);
  const Belief b = Belief::uniform(thetas);
  for (const LearnerSpec& spec : all_kinds()) {
    EXPECT_EQ(update_belief(b, env, ev.demo(), spec).masses(), update_belief(b, ev, spec).masses());
  }
}

TEST(PosteriorTargetProb, Examples) {
  const auto thetas = sample_candidate_thetas(4, 57);
  EXPECT_DOUBLE_EQ(posterior_target_prob(Belief::uniform(thetas)), 1.0 / 5.0);
  EXPECT_EQ(posterior_target_prob(Belief(thetas, {0, 0, 0, 0, 3}, 4)), 1.0);
  EXPECT_DOUBLE_EQ(posterior_target_prob(Belief(thetas, {1, 2, 3, 4, 5}, 2)), 3.0 / 15.0);
  EXPECT_THROW(posterior_target_prob(Belief(thetas, {0, 0, 0, 0, 0}, 4)), DegenerateBelief);
  EXPECT_TRUE(Belief(thetas, {0, 0, 0, 0, 0}, 4).degenerate());
  EXPECT_THROW(Belief(thetas, {1, 1}, 0), DomainError);
  EXPECT_THROW(Belief(thetas, {1, 1, -1, 1, 1}, 0), DomainError);
}

TEST(SampleThetas, DeterministicBoundedWithTarget) {
  ThetaBounds bounds;
  const auto a = sample_candidate_thetas(100, 58, bounds);
  EXPECT_EQ(a, sample_candidate_thetas(100, 58, bounds));
  EXPECT_NE(a, sample_candidate_thetas(100, 59, bounds));
  ASSERT_EQ(a.size(), 101u);
  EXPECT_EQ(a.back(), kThetaStar);
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
      EXPECT_GE(a[i].w[k], bounds.lo[k]);
      EXPECT_LE(a[i].w[k], bounds.hi[k]);
    }
  }
  EXPECT_THROW(sample_candidate_thetas(0, 1), ConfigError);
}

TEST(BeliefProperty, DeterministicMonotonicity) {
  const EvidenceFixture& f = fixture();
  for (const LearnerSpec& spec : all_kinds()) {
    if (spec.effect == Effect::Probabilistic && spec.metric != Metric::Strategy) continue;
    Belief b = Belief::uniform(f.thetas);
    double prev = posterior_target_prob(b);
    for (const EnvironmentEvidence& ev : f.evidence) {
      b = update_belief(b, ev, spec);
      ASSERT_FALSE(b.degenerate());
      EXPECT_EQ(b.masses()[b.target_index()], 1.0);
      const double now = posterior_target_prob(b);
      EXPECT_GE(now, prev) << spec.id();
      prev = now;
    }
  }
}

TEST(BeliefProperty, OrderInvariance) {
  const EvidenceFixture& f = fixture();
  Rng rng(60);
  for (const LearnerSpec& spec : all_kinds()) {
    std::vector<std::size_t> order(f.evidence.size());
    std::iota(order.begin(), order.end(), 0);
    Belief fwd = Belief::uniform(f.thetas);
    for (std::size_t i : order) fwd = update_belief(fwd, f.evidence[i], spec);
    for (int trial = 0; trial < 5; ++trial) {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
      Belief perm = Belief::uniform(f.thetas);
      for (std::size_t i : order) perm = update_belief(perm, f.evidence[i], spec);
      if (fwd.degenerate()) {
        EXPECT_TRUE(perm.degenerate());
        continue;
      }
      EXPECT_LE(rel_err(posterior_target_prob(perm), posterior_target_prob(fwd)), 1e-12);
    }
  }
}
