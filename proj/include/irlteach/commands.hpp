#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "irlteach/evaluation_harness.hpp"
#include "irlteach/run_config.hpp"
#include "irlteach/teaching_engine.hpp"

namespace irlteach {

inline constexpr const char* kToolVersion = "irlteach 0.1.0";

/// Model ids accepted by `teach`.
const std::vector<std::string>& teach_model_ids();

/// Context plus the prepared environment pool for a configuration.
struct Pipeline {
  RunConfig config;
  TeachingContext context;
  PreparedPool pool;
};

Pipeline prepare_pipeline(const RunConfig& config);

/// The seven ideal learners with tau/lambda from the config, or selected
/// on the pool where the config says auto.
std::vector<LearnerSpec> resolve_learners(const RunConfig& config, const PreparedPool& pool,
                                          std::vector<HyperparameterChoice>* choices = nullptr);

struct GeneratedSequence {
  TeachingSequence sequence;
  LearnerSpec scoring;  // learner whose posterior the trace reports
};

/// Runs the generator behind a teach model id.
GeneratedSequence generate_sequence(const std::string& model, const Pipeline& p,
                                    const std::vector<LearnerSpec>& learners);

/// Teaching examples for a stored sequence, re-derived from the pool
/// context; throws ConfigError if a stored trajectory is not theta*-optimal.
TeachingSequence load_sequence(const std::string& path, const Pipeline& p, LearnerSpec* scoring);

// Each command writes into config.out_dir, records digests of the files it
// wrote in manifest.txt, and returns their names.
std::vector<std::string> cmd_enumerate(const RunConfig& config);
std::vector<std::string> cmd_teach(const RunConfig& config, const std::string& model);
std::vector<std::string> cmd_evaluate(const RunConfig& config,
                                      const std::vector<std::string>& sequence_files);
std::vector<std::string> cmd_hyperparam(const RunConfig& config);
std::vector<std::string> cmd_export_trajectories(const RunConfig& config,
                                                 const std::vector<std::size_t>& env_indices);

}  // namespace irlteach
