#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "irlteach/environment_catalog.hpp"
#include "irlteach/learner_models.hpp"
#include "irlteach/trajectory_optimizer.hpp"

namespace irlteach {

inline OptimizerConfig refining_optimizer() {
  OptimizerConfig c;
  c.local_refinement = true;
  return c;
}

/// Fixed inputs shared by every teaching and evaluation step.
struct TeachingContext {
  std::vector<ThetaVector> thetas;
  std::size_t target_index = 0;
  EnvironmentConfig environment;
  OptimizerConfig optimizer = refining_optimizer();
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Default context: `count` sampled thetas plus theta* as the target.
TeachingContext default_context(std::uint64_t seed, std::size_t theta_count = 100);

/// One environment with its theta*-optimal demonstration and the distances
/// every candidate theta's optimum has to it.
struct TeachingExample {
  EnvironmentSpec spec;
  std::size_t catalog_index = 0;
  Trajectory demo;
  StrategyLabel label;
  ThetaDistances distances;
  std::vector<double> target_gaps;  // theta* reward gap of every candidate

  std::vector<double> likelihoods(const LearnerSpec& spec) const {
    return distances.likelihoods(spec);
  }
};

TeachingExample make_example(const EnvironmentSpec& spec, const TeachingContext& ctx);

struct EnvironmentPool {
  std::vector<EnvironmentSpec> specs;  // canonical catalog order
  std::uint64_t seed = 0;
  bool full = false;
};

/// `per_class` specs drawn without replacement from each environment class.
EnvironmentPool stratified_pool(std::uint64_t seed, std::size_t per_class = 100);
EnvironmentPool full_pool();
/// Arbitrary specs, sorted into canonical order, duplicates removed.
EnvironmentPool explicit_pool(std::vector<EnvironmentSpec> specs);

/// Pool with every example computed once (in parallel over environments).
struct PreparedPool {
  std::vector<TeachingExample> examples;  // canonical order
  std::vector<ThetaVector> thetas;
  std::size_t target_index = 0;

  std::size_t size() const { return examples.size(); }
};

PreparedPool prepare_pool(const EnvironmentPool& pool, const TeachingContext& ctx);

struct TeachingSequence {
  std::string generator;
  std::vector<TeachingExample> entries;
  std::vector<double> posterior_trace;  // after each prefix
  std::vector<StrategyVariant> uncoverable;
  std::vector<std::size_t> skipped_degenerate;  // catalog indices

  std::size_t size() const { return entries.size(); }
};

inline constexpr std::size_t kMaxExamples = 10;

/// Uniform prior over the pool's thetas folded through `entries`.
Belief fold_examples(const LearnerSpec& spec, const std::vector<TeachingExample>& entries,
                     const std::vector<ThetaVector>& thetas, std::size_t target_index);

/// Posterior of theta* after each prefix of `entries` under `spec`.
std::vector<double> posterior_trace(const LearnerSpec& spec,
                                    const std::vector<TeachingExample>& entries,
                                    const std::vector<ThetaVector>& thetas,
                                    std::size_t target_index);

/// Greedy maximization of the theta* posterior. Each step appends the pool
/// environment (not yet chosen) with the highest resulting posterior, first
/// in canonical order on ties; stops when the best gain is not strictly
/// positive, is below `min_gain`, or max_n is reached.
TeachingSequence greedy_select(const LearnerSpec& spec, const PreparedPool& pool,
                               std::size_t max_n = kMaxExamples, double min_gain = 0.0);

inline constexpr double kDefaultCoverageEpsilon = 0.01;

/// Greedy until the marginal gain drops below epsilon, then one example per
/// uncovered cluster (the one maximizing the extended prefix's posterior).
TeachingSequence coverage_augmented_select(const LearnerSpec& spec, const PreparedPool& pool,
                                           double epsilon = kDefaultCoverageEpsilon,
                                           std::size_t max_n = kMaxExamples);

struct RandomBaseline {
  TeachingSequence sequence;
  std::vector<std::vector<std::size_t>> draws;  // pool indices per sample
  std::vector<double> scores;                   // Exact posterior per sample
  std::size_t chosen_sample = 0;
};

/// `samples` sequences of n distinct pool environments, ranked by Exact
/// posterior (stable ascending); returns the one at rank samples / 2.
RandomBaseline random_baseline(std::uint64_t seed, const PreparedPool& pool, std::size_t n = 8,
                               std::size_t samples = 1000);

/// One uniformly chosen pool environment per strategy cluster, in cluster
/// order. Throws ConfigError naming clusters the pool cannot realize.
TeachingSequence coverage_random(std::uint64_t seed, const PreparedPool& pool);

/// The 11 powers of ten from 1e-5 to 1e5.
std::vector<double> hyperparameter_grid();

struct HyperparameterTrial {
  double value = 0.0;
  double increase = 0.0;  // trace.back() - trace.front()
  std::size_t distinct_labels = 0;
  std::size_t length = 0;
};

struct HyperparameterChoice {
  LearnerSpec spec;
  double value = 0.0;
  bool flagged = false;  // no grid value reached min_increase
  std::vector<HyperparameterTrial> trials;
};

/// Picks tau or lambda for a Deterministic or Probabilistic family: among
/// values whose greedy sequence raises the posterior by >= min_increase,
/// the one with the most distinct strategy labels (smaller on ties);
/// otherwise the largest raw increase, flagged.
HyperparameterChoice select_hyperparameter(Effect effect, Metric metric, const PreparedPool& pool,
                                           const std::vector<double>& grid = hyperparameter_grid(),
                                           double min_increase = 0.1,
                                           std::size_t max_n = kMaxExamples);

}  // namespace irlteach
