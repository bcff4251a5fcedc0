#include "irlteach/evaluation_harness.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "irlteach/common.hpp"

namespace irlteach {
namespace {

StrategyVariant partner_of(StrategyVariant v) {
  const std::size_t c = cluster_index(v);
  return static_cast<StrategyVariant>(c % 2 == 0 ? c + 1 : c - 1);
}

std::size_t answer_from_tables(const LearnerSpec& spec, const Belief& b,
                               const std::vector<ThetaDistances>& tables) {
  if (b.degenerate()) throw DegenerateBelief("simulated answer: belief has no mass");
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t j = 0; j < tables.size(); ++j) {
    if (tables[j].size() != b.size()) throw DomainError("simulated answer: theta count mismatch");
    const std::vector<double> lik = tables[j].likelihoods(spec);
    double score = 0.0;
    for (std::size_t i = 0; i < lik.size(); ++i) score += b.masses()[i] * lik[i];
    if (score > best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

}  // namespace

EvalMatrix cross_evaluate(const std::vector<TeachingSequence>& sequences,
                          const std::vector<LearnerSpec>& specs,
                          const std::vector<ThetaVector>& thetas, std::size_t target_index) {
  EvalMatrix m;
  for (const TeachingSequence& s : sequences) m.row_labels.push_back(s.generator);
  for (const LearnerSpec& s : specs) m.col_labels.push_back(s.id());
  for (const auto* labels : {&m.row_labels, &m.col_labels}) {
    if (std::set<std::string>(labels->begin(), labels->end()).size() != labels->size()) {
      throw ConfigError("cross_evaluate: duplicate row or column label");
    }
  }
  m.cells.assign(sequences.size(), std::vector<double>(specs.size(), 0.0));
  m.degenerate.assign(sequences.size(), std::vector<bool>(specs.size(), false));
  std::vector<char> flags(sequences.size() * specs.size(), 0);
  parallel_for(sequences.size() * specs.size(), [&](std::size_t k) {
    const std::size_t r = k / specs.size();
    const std::size_t c = k % specs.size();
    const Belief b = fold_examples(specs[c], sequences[r].entries, thetas, target_index);
    if (b.degenerate()) {
      flags[k] = 1;
      return;
    }
    m.cells[r][c] = posterior_target_prob(b);
  });
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (flags[k]) m.degenerate[k / specs.size()][k % specs.size()] = true;
  }
  return m;
}

TallyGrid tally_examples_by_class(const TeachingSequence& seq) {
  TallyGrid grid{};
  for (const TeachingExample& e : seq.entries) {
    grid[slot_of(e.label.variant)][static_cast<std::size_t>(class_of(e.label.variant))] += 1;
  }
  return grid;
}

int helpful_environment_count(const TeachingSequence& seq, EnvClassKind cls, StrategyVariant a) {
  if (class_of(a) != cls) throw ConfigError("helpful_environment_count: strategy not in class");
  const StrategyVariant b = partner_of(a);
  int x = 0;
  int y = 0;
  for (const TeachingExample& e : seq.entries) {
    if (e.label.variant == a) ++x;
    if (e.label.variant == b) ++y;
  }
  return x > 0 ? x : -y;
}

std::vector<StrategyVariant> test_targets() {
  return {StrategyVariant::MergeAhead,     StrategyVariant::MergeBehind,
          StrategyVariant::StayBehind,     StrategyVariant::PassLane,
          StrategyVariant::AvoidTailgater, StrategyVariant::SpeedUp};
}

double default_gap_threshold(const PreparedPool& pool, double scale) {
  std::vector<double> gaps;
  for (const TeachingExample& e : pool.examples) {
    for (double g : e.target_gaps) {
      if (g > 0.0) gaps.push_back(g);
    }
  }
  if (gaps.empty()) throw ConfigError("default_gap_threshold: pool has no suboptimal candidates");
  std::sort(gaps.begin(), gaps.end());
  return scale * gaps[gaps.size() / 2];
}

TestEnvironmentSet generate_test_environments(const PreparedPool& pool, const TeachingContext& ctx,
                                              double threshold, std::uint64_t seed) {
  if (!(threshold >= 0.0)) throw ConfigError("test gap threshold must be >= 0");
  const std::vector<StrategyVariant> targets = test_targets();
  std::vector<bool> met(targets.size(), false);
  TestEnvironmentSet out;
  out.threshold = threshold;
  out.environments.resize(targets.size());

  Rng rng(derive_seed(seed, seed_stream::kTestEnvironments));
  const std::vector<std::size_t> order = rng.sample_without_replacement(pool.size(), pool.size());
  for (std::size_t pi : order) {
    const TeachingExample& ex = pool.examples[pi];
    const auto it = std::find(targets.begin(), targets.end(), ex.label.variant);
    if (it == targets.end()) continue;
    const std::size_t t = static_cast<std::size_t>(it - targets.begin());
    if (met[t]) continue;

    const Environment env = instantiate(ex.spec, ctx.environment);
    const EnvironmentEvidence ev =
        build_evidence(env, pool.thetas, pool.target_index, ctx.optimizer);
    const StrategyVariant mate_cluster = targets[t];
    const StrategyVariant other_cluster = partner_of(targets[t]);
    std::vector<std::size_t> same, other;
    for (std::size_t j = 0; j < ev.set.size(); ++j) {
      if (j == ev.demo_index || ev.target_gaps[j] < threshold) continue;
      if (ev.set.labels[j].variant == mate_cluster) same.push_back(j);
      if (ev.set.labels[j].variant == other_cluster) other.push_back(j);
    }
    if (same.empty() || other.size() < 2) continue;
    auto by_gap = [&](std::size_t a, std::size_t b) {
      return ev.target_gaps[a] < ev.target_gaps[b] || (ev.target_gaps[a] == ev.target_gaps[b] && a < b);
    };
    std::sort(same.begin(), same.end(), by_gap);
    std::sort(other.begin(), other.end(), by_gap);

    TestEnvironment te;
    te.spec = ex.spec;
    te.target = targets[t];
    te.correct_index = 0;
    for (std::size_t j : {ev.demo_index, same[0], other[0], other[1]}) {
      te.options.push_back(ev.set.trajectories[j]);
      te.option_labels.push_back(ev.set.labels[j]);
      te.option_gaps.push_back(ev.target_gaps[j]);
      te.option_distances.push_back(observation_distances(ev.set, pool.thetas, j));
    }
    out.environments[t] = std::move(te);
    met[t] = true;
    if (std::all_of(met.begin(), met.end(), [](bool b) { return b; })) break;
  }

  std::string unmet;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (met[t]) continue;
    if (!unmet.empty()) unmet += ",";
    unmet += to_string(targets[t]);
  }
  if (!unmet.empty()) {
    throw ConfigError("generate_test_environments: sampling budget exhausted; unmet targets: " +
                      unmet);
  }
  return out;
}

std::size_t simulated_learner_answer(const LearnerSpec& spec, const Belief& b,
                                     const TestEnvironment& test) {
  return answer_from_tables(spec, b, test.option_distances);
}

std::size_t simulated_learner_answer(const LearnerSpec& spec, const Belief& b,
                                     const Environment& env, const std::vector<Trajectory>& options,
                                     const OptimizerConfig& config) {
  if (options.empty()) throw ConfigError("simulated answer: no options");
  CandidateSet set = candidate_set(env, config);
  augment_with_optima(set, b.thetas(), config);
  std::vector<std::size_t> idx;
  for (const Trajectory& o : options) idx.push_back(append_candidate(set, o, {}, config));
  renormalize(set);
  std::vector<ThetaDistances> tables;
  for (std::size_t j : idx) tables.push_back(observation_distances(set, b.thetas(), j));
  return answer_from_tables(spec, b, tables);
}

std::vector<AnswerCheck> simulated_test_answers(const TeachingSequence& seq,
                                                const LearnerSpec& spec,
                                                const std::vector<ThetaVector>& thetas,
                                                std::size_t target_index,
                                                const TestEnvironmentSet& tests) {
  const Belief b = fold_examples(spec, seq.entries, thetas, target_index);
  std::vector<AnswerCheck> out;
  for (const TestEnvironment& te : tests.environments) {
    AnswerCheck c;
    c.generator = seq.generator;
    c.target = te.target;
    c.covered = std::any_of(seq.entries.begin(), seq.entries.end(),
                            [&](const TeachingExample& e) { return e.label.variant == te.target; });
    if (b.degenerate()) {
      out.push_back(c);
      continue;
    }
    c.posterior = posterior_target_prob(b);
    c.chosen = simulated_learner_answer(spec, b, te);
    c.correct = c.chosen == te.correct_index;
    out.push_back(c);
  }
  return out;
}

}  // namespace irlteach
