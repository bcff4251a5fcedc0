#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "irlteach/common.hpp"
#include "irlteach/environment_catalog.hpp"
#include "irlteach/learner_models.hpp"
#include "irlteach/teaching_engine.hpp"
#include "irlteach/trajectory_optimizer.hpp"

namespace irlteach::test {

inline EnvironmentSpec spec(Goal goal, int offset, Lane lane, int v0) {
  return {goal, offset, lane, v0, 0.0, std::nullopt};
}

inline EnvironmentSpec ramp_spec(Goal goal, int offset, Lane lane, int v0, double at, int vf) {
  return {goal, offset, lane, v0, at, vf};
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Refinement kept short so unit tests stay fast.
inline OptimizerConfig quick_refining() {
  OptimizerConfig c;
  c.local_refinement = true;
  c.refinement_iterations = 6;
  return c;
}

inline TeachingContext small_context(std::uint64_t seed, std::size_t theta_count,
                                     bool refine = true) {
  TeachingContext ctx = default_context(seed, theta_count);
  ctx.optimizer = refine ? quick_refining() : OptimizerConfig{};
  return ctx;
}

inline std::vector<EnvironmentSpec> random_specs(std::uint64_t seed, std::size_t n) {
  const std::vector<EnvironmentSpec> all = enumerate_environments();
  Rng rng(seed);
  std::vector<EnvironmentSpec> out;
  for (std::size_t i : rng.sample_without_replacement(all.size(), n)) out.push_back(all[i]);
  return out;
}

// Reward of every candidate, computed with a plain loop.
inline std::vector<double> oracle_rewards(const ThetaVector& theta, const CandidateSet& set) {
  std::vector<double> r;
  for (const FeatureVector& f : set.features) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kNumFeatures; ++k) acc += theta.w[k] * f.values[k];
    r.push_back(acc);
  }
  return r;
}

}  // namespace irlteach::test
