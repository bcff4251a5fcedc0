#include "irlteach/learner_models.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "irlteach/common.hpp"
#include "irlteach/kernels.hpp"

namespace irlteach {
namespace {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::Reward: return "reward";
    case Metric::Euclidean: return "euclid";
    case Metric::Strategy: return "strategy";
  }
  return "?";
}

double snap_reward_gap(double best, double obs) {
  const double gap = best - obs;
  if (gap <= kCoOptimalRelTol * std::abs(best)) return 0.0;
  return gap;
}

double raw_reward_gap(double best, double obs) { return std::max(0.0, best - obs); }

// Elimination-style learners treat co-optimal observations as optimal; the
// exponential effect uses the raw gap.
bool snaps_reward(const LearnerSpec& spec) { return spec.effect != Effect::Probabilistic; }

double metric_distance(const LearnerSpec& spec, const ThetaVector& theta, const CandidateSet& set,
                       std::size_t theta_opt, const Trajectory& obs,
                       const FeatureVector& obs_features, const StrategyLabel& obs_label) {
  switch (spec.metric) {
    case Metric::Reward: {
      const double best = reward(theta, set.features[theta_opt]);
      const double r = reward(theta, obs_features);
      return snaps_reward(spec) ? snap_reward_gap(best, r) : raw_reward_gap(best, r);
    }
    case Metric::Euclidean: return distance_euclidean(set.trajectories[theta_opt], obs);
    case Metric::Strategy:
      return set.labels[theta_opt].variant == obs_label.variant ? 0.0 : kInfiniteDistance;
  }
  return kInfiniteDistance;
}

struct ObservedSet {
  CandidateSet set;
  std::size_t obs_index;
};

ObservedSet observed_set(std::span<const ThetaVector> thetas, const Environment& env,
                         const Trajectory& xi_obs, const OptimizerConfig& config) {
  ObservedSet out{candidate_set(env, config), 0};
  augment_with_optima(out.set, thetas, config);
  out.obs_index = append_candidate(out.set, xi_obs, ManeuverTemplate{}, config);
  renormalize(out.set);
  return out;
}

}  // namespace

LearnerSpec LearnerSpec::deterministic(Metric m, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be finite and >= 0");
  return LearnerSpec{Effect::Deterministic, m, tau}.canonical();
}

LearnerSpec LearnerSpec::probabilistic(Metric m, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and > 0");
  return LearnerSpec{Effect::Probabilistic, m, lambda};
}

LearnerSpec LearnerSpec::canonical() const {
  if (effect == Effect::Deterministic && metric == Metric::Reward && param == 0.0) return exact();
  if (effect == Effect::Exact) return exact();
  return *this;
}

std::string LearnerSpec::id() const {
  switch (effect) {
    case Effect::Exact: return "exact";
    case Effect::Deterministic: return std::string("det-") + metric_name(metric);
    case Effect::Probabilistic: return std::string("prob-") + metric_name(metric);
  }
  return "?";
}

LearnerSpec learner_from_id(std::string_view id, double param) {
  if (id == "exact") return LearnerSpec::exact();
  for (Metric m : {Metric::Reward, Metric::Euclidean, Metric::Strategy}) {
    const std::string name = metric_name(m);
    if (id == "det-" + name) return LearnerSpec{Effect::Deterministic, m, param}.canonical();
    if (id == "prob-" + name) return LearnerSpec{Effect::Probabilistic, m, param};
  }
  throw ConfigError("unknown learner id: " + std::string(id));
}

std::vector<LearnerSpec> standard_learners(double det_reward_tau, double det_euclid_tau,
                                           double prob_reward_lambda, double prob_euclid_lambda) {
  return {
      LearnerSpec::exact(),
      LearnerSpec::deterministic(Metric::Reward, det_reward_tau),
      LearnerSpec::deterministic(Metric::Euclidean, det_euclid_tau),
      LearnerSpec{Effect::Deterministic, Metric::Strategy, 0.0},
      LearnerSpec::probabilistic(Metric::Reward, prob_reward_lambda),
      LearnerSpec::probabilistic(Metric::Euclidean, prob_euclid_lambda),
      LearnerSpec{Effect::Probabilistic, Metric::Strategy, 1.0},
  };
}

double distance_reward(const ThetaVector& theta, const CandidateSet& set,
                       const FeatureVector& obs_features) {
  const std::vector<double> r = candidate_rewards(theta, set);
  const double best = r[argmax_first(r)];
  return snap_reward_gap(best, reward(theta, obs_features));
}

double distance_reward(const ThetaVector& theta, const Environment& env, const Trajectory& xi_obs,
                       const OptimizerConfig& config) {
  const ObservedSet o = observed_set(std::span(&theta, 1), env, xi_obs, config);
  return distance_reward(theta, o.set, o.set.features[o.obs_index]);
}

double distance_euclidean(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size() || a.states.empty()) {
    throw DomainError("distance_euclidean: trajectories differ in length");
  }
  if (a.dt != b.dt) throw DomainError("distance_euclidean: dt mismatch");
  return kernels::active().mean_state_distance(reinterpret_cast<const double*>(a.states.data()),
                                               reinterpret_cast<const double*>(b.states.data()),
                                               a.states.size() - 1);
}

double distance_euclidean(const Trajectory& a, const Trajectory& b,
                          const std::array<double, 5>& scale) {
  auto scaled = [&](const Trajectory& t) {
    Trajectory out = t;
    for (VehicleState& s : out.states) {
      s = VehicleState{s.x * scale[0], s.y * scale[1], s.heading * scale[2], s.v * scale[3],
                       s.alpha * scale[4]};
    }
    return out;
  };
  return distance_euclidean(scaled(a), scaled(b));
}

double distance_strategy(const Trajectory& a, const Trajectory& b, const Environment& env) {
  return classify_strategy(a, env).variant == classify_strategy(b, env).variant
             ? 0.0
             : kInfiniteDistance;
}

double likelihood_from_distance(const LearnerSpec& spec, double d) {
  if (spec.metric == Metric::Strategy) return d == 0.0 ? 1.0 : 0.0;
  switch (spec.effect) {
    case Effect::Exact: return d == 0.0 ? 1.0 : 0.0;
    case Effect::Deterministic: return d <= spec.param ? 1.0 : 0.0;
    case Effect::Probabilistic: return std::exp(-spec.param * d);
  }
  return 0.0;
}

double log_likelihood_from_distance(const LearnerSpec& spec, double d) {
  if (spec.effect == Effect::Probabilistic && spec.metric != Metric::Strategy) {
    return -spec.param * d;
  }
  return likelihood_from_distance(spec, d) > 0.0 ? 0.0 : -kInfiniteDistance;
}

namespace {

double observation_distance(const LearnerSpec& spec, const ThetaVector& theta,
                            const CandidateSet& set, std::size_t obs_index) {
  const std::size_t opt = optimal_index(theta, set);
  return metric_distance(spec, theta, set, opt, set.trajectories.at(obs_index),
                         set.features[obs_index], set.labels[obs_index]);
}

}  // namespace

double likelihood(const LearnerSpec& spec, const ThetaVector& theta, const CandidateSet& set,
                  std::size_t obs_index) {
  return likelihood_from_distance(spec, observation_distance(spec, theta, set, obs_index));
}

double log_likelihood(const LearnerSpec& spec, const ThetaVector& theta, const CandidateSet& set,
                      std::size_t obs_index) {
  return log_likelihood_from_distance(spec, observation_distance(spec, theta, set, obs_index));
}

double likelihood(const LearnerSpec& spec, const ThetaVector& theta, const Environment& env,
                  const Trajectory& xi_obs, const OptimizerConfig& config) {
  const ObservedSet o = observed_set(std::span(&theta, 1), env, xi_obs, config);
  return likelihood(spec, theta, o.set, o.obs_index);
}

Belief::Belief(std::vector<ThetaVector> thetas, std::vector<double> prior,
               std::size_t target_index)
    : thetas_(std::move(thetas)), prior_(std::move(prior)), masses_(prior_), target_(target_index) {
  if (thetas_.empty()) throw ConfigError("belief needs at least one candidate");
  if (prior_.size() != thetas_.size()) throw DomainError("belief: prior length mismatch");
  if (target_ >= thetas_.size()) throw DomainError("belief: target index out of range");
  for (double m : prior_) {
    if (!std::isfinite(m) || m < 0.0) throw DomainError("belief: masses must be finite and >= 0");
  }
}

Belief Belief::uniform(std::vector<ThetaVector> thetas) {
  const std::size_t target = thetas.empty() ? 0 : thetas.size() - 1;
  return uniform(std::move(thetas), target);
}

Belief Belief::uniform(std::vector<ThetaVector> thetas, std::size_t target_index) {
  std::vector<double> prior(thetas.size(), 1.0);
  return Belief(std::move(thetas), std::move(prior), target_index);
}

double Belief::total_mass() const {
  return kernels::active().lane_sum(masses_.data(), masses_.size());
}

Belief Belief::scaled(const std::vector<double>& factors) const {
  if (factors.size() != masses_.size()) throw DomainError("belief: likelihood length mismatch");
  Belief out = *this;
  kernels::active().scale_in_place(out.masses_.data(), factors.data(), factors.size());
  return out;
}

std::vector<double> ThetaDistances::likelihoods(const LearnerSpec& spec) const {
  const std::vector<double>* dist = nullptr;
  switch (spec.metric) {
    case Metric::Reward: dist = snaps_reward(spec) ? &reward_distance : &reward_gap; break;
    case Metric::Euclidean: dist = &euclid_distance; break;
    case Metric::Strategy: dist = &strategy_distance; break;
  }
  std::vector<double> out(dist->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = likelihood_from_distance(spec, (*dist)[i]);
  return out;
}

namespace {

ThetaDistances distances_to(const CandidateSet& set, const std::vector<ThetaVector>& thetas,
                            std::size_t obs_index, std::vector<std::size_t>* optima) {
  const Trajectory& obs = set.trajectories.at(obs_index);
  const FeatureVector& obs_f = set.features[obs_index];
  const StrategyVariant obs_variant = set.labels[obs_index].variant;
  const std::size_t n = thetas.size();
  ThetaDistances d;
  d.reward_distance.resize(n);
  d.reward_gap.resize(n);
  d.euclid_distance.resize(n);
  d.strategy_distance.resize(n);
  if (optima != nullptr) optima->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> r = candidate_rewards(thetas[i], set);
    const std::size_t opt = argmax_first(r);
    if (optima != nullptr) (*optima)[i] = opt;
    const double r_obs = reward(thetas[i], obs_f);
    d.reward_distance[i] = snap_reward_gap(r[opt], r_obs);
    d.reward_gap[i] = raw_reward_gap(r[opt], r_obs);
    d.euclid_distance[i] = distance_euclidean(set.trajectories[opt], obs);
    d.strategy_distance[i] = set.labels[opt].variant == obs_variant ? 0.0 : kInfiniteDistance;
  }
  return d;
}

}  // namespace

ThetaDistances observation_distances(const CandidateSet& set,
                                     const std::vector<ThetaVector>& thetas,
                                     std::size_t obs_index) {
  return distances_to(set, thetas, obs_index, nullptr);
}

EnvironmentEvidence build_evidence(CandidateSet set, const std::vector<ThetaVector>& thetas,
                                   std::size_t target_index) {
  if (target_index >= thetas.size()) throw DomainError("build_evidence: bad target index");
  EnvironmentEvidence ev;
  ev.set = std::move(set);
  ev.demo_index = optimal_index(thetas[target_index], ev.set);
  ev.demo_label = ev.set.labels[ev.demo_index];
  ev.distances = distances_to(ev.set, thetas, ev.demo_index, &ev.theta_optimum);
  const std::vector<double> r_target = candidate_rewards(thetas[target_index], ev.set);
  ev.target_gaps.resize(ev.set.size());
  for (std::size_t j = 0; j < ev.set.size(); ++j) {
    ev.target_gaps[j] = raw_reward_gap(r_target[ev.demo_index], r_target[j]);
  }
  return ev;
}

EnvironmentEvidence build_evidence(const Environment& env, const std::vector<ThetaVector>& thetas,
                                   std::size_t target_index, const OptimizerConfig& config) {
  CandidateSet set = candidate_set(env, config);
  augment_with_optima(set, thetas, config);
  return build_evidence(std::move(set), thetas, target_index);
}

Belief update_belief(const Belief& b, const Environment& env, const Trajectory& xi_obs,
                     const LearnerSpec& spec, const OptimizerConfig& config) {
  const ObservedSet o = observed_set(b.thetas(), env, xi_obs, config);
  std::vector<double> lik(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    lik[i] = likelihood(spec, b.thetas()[i], o.set, o.obs_index);
  }
  return b.scaled(lik);
}

Belief update_belief(const Belief& b, const EnvironmentEvidence& evidence,
                     const LearnerSpec& spec) {
  return b.scaled(evidence.likelihoods(spec));
}

double posterior_target_prob(const Belief& b) {
  const double total = b.total_mass();
  if (!(total > 0.0)) throw DegenerateBelief("posterior undefined: every candidate has zero mass");
  return b.masses()[b.target_index()] / total;
}

std::vector<ThetaVector> sample_candidate_thetas(std::size_t count, std::uint64_t seed,
                                                 const ThetaBounds& bounds) {
  if (count == 0) throw ConfigError("sample_candidate_thetas: count must be >= 1");
  Rng rng(seed);
  std::vector<ThetaVector> out;
  out.reserve(count + 1);
  for (std::size_t i = 0; i < count; ++i) {
    ThetaVector t;
    for (std::size_t k = 0; k < kNumFeatures; ++k) t.w[k] = rng.uniform(bounds.lo[k], bounds.hi[k]);
    out.push_back(t);
  }
  out.push_back(kThetaStar);
  return out;
}

}  // namespace irlteach
