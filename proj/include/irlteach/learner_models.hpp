#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irlteach/reward_features.hpp"
#include "irlteach/trajectory_optimizer.hpp"

namespace irlteach {

enum class Effect { Exact, Deterministic, Probabilistic };
enum class Metric { Reward, Euclidean, Strategy };

/// How a modeled learner scores an observed trajectory against a candidate
/// objective. `param` is tau (Deterministic) or lambda (Probabilistic).
struct LearnerSpec {
  Effect effect = Effect::Exact;
  Metric metric = Metric::Reward;
  double param = 0.0;

  static LearnerSpec exact() { return {Effect::Exact, Metric::Reward, 0.0}; }
  static LearnerSpec deterministic(Metric m, double tau);
  static LearnerSpec probabilistic(Metric m, double lambda);

  /// Deterministic reward-based with tau == 0 becomes Exact.
  LearnerSpec canonical() const;

  /// "exact", "det-reward", "prob-euclid", "det-strategy", ...
  std::string id() const;

  friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

/// Inverse of LearnerSpec::id(); `param` supplies tau or lambda.
LearnerSpec learner_from_id(std::string_view id, double param);

/// The seven ideal learners in matrix order: exact, then the deterministic
/// and probabilistic families over (reward, euclidean, strategy).
std::vector<LearnerSpec> standard_learners(double det_reward_tau, double det_euclid_tau,
                                           double prob_reward_lambda, double prob_euclid_lambda);

/// Candidates whose reward is within this fraction of the maximum count as
/// co-optimal.
inline constexpr double kCoOptimalRelTol = 1e-9;

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// theta . phi(best) - theta . phi(obs), snapped to 0 for co-optimal obs.
/// Probabilistic reward learners see the unsnapped gap.
/// `obs_features` must be normalized with the set's constants.
double distance_reward(const ThetaVector& theta, const CandidateSet& set,
                       const FeatureVector& obs_features);
double distance_reward(const ThetaVector& theta, const Environment& env, const Trajectory& xi_obs,
                       const OptimizerConfig& config = {});

/// Mean over steps 1..T of the L2 distance between full 5-dim states.
double distance_euclidean(const Trajectory& a, const Trajectory& b);
/// Same with each state dimension multiplied by `scale` first.
double distance_euclidean(const Trajectory& a, const Trajectory& b,
                          const std::array<double, 5>& scale);

/// 0 when both trajectories fall in the same strategy cluster, +inf otherwise.
double distance_strategy(const Trajectory& a, const Trajectory& b, const Environment& env);

/// Maps a distance to a likelihood under the spec's effect.
double likelihood_from_distance(const LearnerSpec& spec, double distance);
/// Natural log of the same: -lambda d for the exponential effect (finite for
/// finite d, even where exp underflows), 0 or -inf otherwise.
double log_likelihood_from_distance(const LearnerSpec& spec, double distance);

/// P(xi_obs | theta) in [0, 1], unnormalized. The learner's reference
/// trajectory is the argmax of theta over the environment's candidate set.
/// The environment overloads build that set from the template library, the
/// refined optima of the thetas involved, and xi_obs itself.
double likelihood(const LearnerSpec& spec, const ThetaVector& theta, const CandidateSet& set,
                  std::size_t obs_index);
double likelihood(const LearnerSpec& spec, const ThetaVector& theta, const Environment& env,
                  const Trajectory& xi_obs, const OptimizerConfig& config = {});
double log_likelihood(const LearnerSpec& spec, const ThetaVector& theta, const CandidateSet& set,
                      std::size_t obs_index);

/// Weighted set of candidate objectives.
class Belief {
 public:
  Belief(std::vector<ThetaVector> thetas, std::vector<double> prior, std::size_t target_index);

  /// Uniform mass 1 over `thetas`; the target defaults to the last entry.
  static Belief uniform(std::vector<ThetaVector> thetas);
  static Belief uniform(std::vector<ThetaVector> thetas, std::size_t target_index);

  const std::vector<ThetaVector>& thetas() const { return thetas_; }
  const std::vector<double>& masses() const { return masses_; }
  const std::vector<double>& prior() const { return prior_; }
  std::size_t target_index() const { return target_; }
  std::size_t size() const { return thetas_.size(); }

  double total_mass() const;
  bool degenerate() const { return !(total_mass() > 0.0); }

  /// New belief with masses[i] * factors[i].
  Belief scaled(const std::vector<double>& factors) const;

 private:
  std::vector<ThetaVector> thetas_;
  std::vector<double> prior_;
  std::vector<double> masses_;
  std::size_t target_;
};

/// Per candidate theta: distance from the observation to that theta's
/// optimum under each metric.
struct ThetaDistances {
  std::vector<double> reward_distance;  // snapped, for elimination effects
  std::vector<double> reward_gap;       // raw, for the exponential effect
  std::vector<double> euclid_distance;
  std::vector<double> strategy_distance;

  std::size_t size() const { return reward_distance.size(); }
  std::vector<double> likelihoods(const LearnerSpec& spec) const;
};

/// Distances from candidate `obs_index` to every theta's optimum in `set`.
ThetaDistances observation_distances(const CandidateSet& set,
                                     const std::vector<ThetaVector>& thetas,
                                     std::size_t obs_index);

/// Everything the learner models need about one environment given a fixed
/// candidate-theta list: the demonstration (argmax of the target theta) and,
/// per theta, its own optimum and the three distances to the demonstration.
struct EnvironmentEvidence {
  CandidateSet set;
  std::size_t demo_index = 0;
  StrategyLabel demo_label;
  std::vector<std::size_t> theta_optimum;
  ThetaDistances distances;
  // Per candidate: reward gap to the demonstration under the target theta.
  std::vector<double> target_gaps;

  const Trajectory& demo() const { return set.trajectories[demo_index]; }
  std::vector<double> likelihoods(const LearnerSpec& spec) const {
    return distances.likelihoods(spec);
  }
};

EnvironmentEvidence build_evidence(CandidateSet set, const std::vector<ThetaVector>& thetas,
                                   std::size_t target_index);
/// Library set for `env`, augmented with every theta's refined optimum.
EnvironmentEvidence build_evidence(const Environment& env, const std::vector<ThetaVector>& thetas,
                                   std::size_t target_index, const OptimizerConfig& config = {});

/// Multiplies each candidate's mass by its likelihood of xi_obs.
Belief update_belief(const Belief& b, const Environment& env, const Trajectory& xi_obs,
                     const LearnerSpec& spec, const OptimizerConfig& config = {});
Belief update_belief(const Belief& b, const EnvironmentEvidence& evidence,
                     const LearnerSpec& spec);

/// mass(target) / total. Throws DegenerateBelief when no mass is left.
double posterior_target_prob(const Belief& b);

struct ThetaBounds {
  std::array<double, kNumFeatures> lo{-128.0, -1.0, -2.0, -1.0, -1.0};
  std::array<double, kNumFeatures> hi{0.0, 0.0, 0.0, 0.0, 0.0};
};

/// `count` draws uniform in the box, then theta* appended (index `count`).
std::vector<ThetaVector> sample_candidate_thetas(std::size_t count, std::uint64_t seed,
                                                 const ThetaBounds& bounds = {});

}  // namespace irlteach
