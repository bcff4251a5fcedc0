#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irlteach/environment_catalog.hpp"
#include "irlteach/learner_models.hpp"
#include "irlteach/teaching_engine.hpp"

namespace irlteach {

enum class PoolMode { Sample, Full };

/// Every tunable of a run. Defaults reproduce the reference run.
struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t theta_count = 100;
  ThetaBounds theta_bounds;

  PoolMode pool_mode = PoolMode::Sample;
  std::size_t pool_per_class = 100;

  EnvironmentConfig environment;
  DynamicsParams dynamics;
  FeatureParams features;

  bool local_refinement = true;
  std::size_t refinement_blocks = 5;
  std::size_t refinement_iterations = 40;

  std::vector<double> hyper_grid = hyperparameter_grid();
  double min_increase = 0.1;
  std::size_t max_examples = kMaxExamples;
  double coverage_epsilon = kDefaultCoverageEpsilon;
  std::size_t baseline_length = 8;
  std::size_t baseline_samples = 1000;
  double test_gap_scale = 0.5;
  std::optional<double> test_gap_threshold;  // unset: scale x median gap

  // Unset: chosen by select_hyperparameter.
  std::optional<double> det_reward_tau;
  std::optional<double> det_euclid_tau;
  std::optional<double> prob_reward_lambda;
  std::optional<double> prob_euclid_lambda;

  unsigned threads = 0;
  std::string out_dir = "irlteach-out";
};

/// Flat `key = value` text; `#` starts a comment; unknown keys and
/// malformed values throw ConfigError. Keys not present keep `base` values.
RunConfig parse_run_config(std::istream& in, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

/// Applies IRLTEACH_SEED and IRLTEACH_OUT when set.
void apply_environment_overrides(RunConfig& config);

/// Throws ConfigError on non-positive sizes, empty grids, inverted bounds.
void validate(const RunConfig& config);

/// All keys in canonical order with their formatted values; parsing the
/// formatted text yields an equal configuration.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);
std::string format_run_config(const RunConfig& config);

std::string to_string(PoolMode mode);

TeachingContext make_context(const RunConfig& config);
EnvironmentPool make_pool(const RunConfig& config);

}  // namespace irlteach
