#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "irlteach/teaching_engine.hpp"

namespace irlteach {

/// Rows: sequence generators. Columns: ideal learners. Cells: posterior of
/// theta* after the learner folds the row's sequence from a uniform prior.
struct EvalMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<double>> cells;
  std::vector<std::vector<bool>> degenerate;  // cell recorded as 0

  std::size_t rows() const { return row_labels.size(); }
  std::size_t cols() const { return col_labels.size(); }
  double at(std::size_t r, std::size_t c) const { return cells[r][c]; }
};

EvalMatrix cross_evaluate(const std::vector<TeachingSequence>& sequences,
                          const std::vector<LearnerSpec>& specs,
                          const std::vector<ThetaVector>& thetas, std::size_t target_index);

/// [slot][class]: slot 0/1 within the class pair, classes in
/// Merging, Braking, Tailgating, Other order.
using TallyGrid = std::array<std::array<int, 4>, 2>;

TallyGrid tally_examples_by_class(const TeachingSequence& seq);

/// x if x > 0 else -y, where x counts examples labeled `a` and y those with
/// the other strategy of `cls`.
int helpful_environment_count(const TeachingSequence& seq, EnvClassKind cls, StrategyVariant a);

struct TestEnvironment {
  EnvironmentSpec spec;
  StrategyVariant target = StrategyVariant::MergeAhead;
  std::vector<Trajectory> options;  // correct option first, then its cluster mate
  std::vector<StrategyLabel> option_labels;
  std::vector<double> option_gaps;  // theta* reward gap to the correct option
  std::vector<ThetaDistances> option_distances;
  std::size_t correct_index = 0;
};

struct TestEnvironmentSet {
  std::vector<TestEnvironment> environments;
  double threshold = 0.0;
};

/// The six (class, strategy) targets of the informative classes.
std::vector<StrategyVariant> test_targets();

/// Median over pool examples of the nonzero theta* reward gaps, times `scale`.
double default_gap_threshold(const PreparedPool& pool, double scale = 0.5);

/// Scans the pool in a seeded random order. An environment is accepted for
/// an unmet target when its demonstration carries that label and its
/// candidate set holds three alternates, each at least `threshold` below the
/// demonstration's theta* reward: one more in the target cluster, two in the
/// other cluster of the class. The nearest qualifying alternates are used.
TestEnvironmentSet generate_test_environments(const PreparedPool& pool, const TeachingContext& ctx,
                                              double threshold, std::uint64_t seed);

/// Option maximizing sum over theta of mass * likelihood; lowest index on
/// ties. Throws DegenerateBelief for a belief without mass.
std::size_t simulated_learner_answer(const LearnerSpec& spec, const Belief& b,
                                     const TestEnvironment& test);
std::size_t simulated_learner_answer(const LearnerSpec& spec, const Belief& b,
                                     const Environment& env, const std::vector<Trajectory>& options,
                                     const OptimizerConfig& config = {});

struct AnswerCheck {
  std::string generator;
  StrategyVariant target = StrategyVariant::MergeAhead;
  bool covered = false;  // the sequence shows the target strategy
  double posterior = 0.0;
  std::size_t chosen = 0;
  bool correct = false;
};

/// Answers every test environment after `spec` folds `seq`.
std::vector<AnswerCheck> simulated_test_answers(const TeachingSequence& seq,
                                                const LearnerSpec& spec,
                                                const std::vector<ThetaVector>& thetas,
                                                std::size_t target_index,
                                                const TestEnvironmentSet& tests);

}  // namespace irlteach
