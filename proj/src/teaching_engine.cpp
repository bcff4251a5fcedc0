#include "irlteach/teaching_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "irlteach/common.hpp"

namespace irlteach {
namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Candidate {
  std::size_t index = kNone;
  double posterior = 0.0;
};

// Posterior after appending each allowed pool example to `b`; degenerate
// results are reported through `degenerate`.
std::vector<double> extension_posteriors(const Belief& b,
                                         const std::vector<std::vector<double>>& lik,
                                         const std::vector<char>& allowed,
                                         std::vector<char>& degenerate, unsigned threads) {
  std::vector<double> post(lik.size(), -1.0);
  degenerate.assign(lik.size(), 0);
  parallel_for(
      lik.size(),
      [&](std::size_t i) {
        if (!allowed[i]) return;
        const Belief nb = b.scaled(lik[i]);
        if (nb.degenerate()) {
          degenerate[i] = 1;
          return;
        }
        post[i] = posterior_target_prob(nb);
      },
      threads);
  return post;
}

Candidate best_of(const std::vector<double>& post, const std::vector<char>& allowed,
                  const std::vector<char>& degenerate) {
  Candidate best;
  for (std::size_t i = 0; i < post.size(); ++i) {
    if (!allowed[i] || degenerate[i]) continue;
    if (best.index == kNone || post[i] > best.posterior) best = {i, post[i]};
  }
  return best;
}

void note_skipped(TeachingSequence& seq, const PreparedPool& pool,
                  const std::vector<char>& degenerate) {
  for (std::size_t i = 0; i < degenerate.size(); ++i) {
    if (!degenerate[i]) continue;
    const std::size_t idx = pool.examples[i].catalog_index;
    if (std::find(seq.skipped_degenerate.begin(), seq.skipped_degenerate.end(), idx) ==
        seq.skipped_degenerate.end()) {
      seq.skipped_degenerate.push_back(idx);
    }
  }
}

std::vector<std::vector<double>> pool_likelihoods(const LearnerSpec& spec,
                                                  const PreparedPool& pool) {
  std::vector<std::vector<double>> lik(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) lik[i] = pool.examples[i].likelihoods(spec);
  return lik;
}

TeachingSequence sequence_from(std::string generator, const PreparedPool& pool,
                               const std::vector<std::size_t>& picks, const LearnerSpec& scoring) {
  TeachingSequence seq;
  seq.generator = std::move(generator);
  for (std::size_t i : picks) seq.entries.push_back(pool.examples[i]);
  seq.posterior_trace = posterior_trace(scoring, seq.entries, pool.thetas, pool.target_index);
  return seq;
}

}  // namespace

TeachingContext default_context(std::uint64_t seed, std::size_t theta_count) {
  TeachingContext ctx;
  ctx.thetas = sample_candidate_thetas(theta_count, derive_seed(seed, seed_stream::kThetas));
  ctx.target_index = theta_count;
  return ctx;
}

TeachingExample make_example(const EnvironmentSpec& spec, const TeachingContext& ctx) {
  const Environment env = instantiate(spec, ctx.environment);
  EnvironmentEvidence ev = build_evidence(env, ctx.thetas, ctx.target_index, ctx.optimizer);
  TeachingExample ex;
  ex.spec = spec;
  ex.catalog_index = catalog_index(spec);
  ex.demo = ev.demo();
  ex.label = ev.demo_label;
  ex.distances = std::move(ev.distances);
  ex.target_gaps = std::move(ev.target_gaps);
  return ex;
}

EnvironmentPool stratified_pool(std::uint64_t seed, std::size_t per_class) {
  const std::vector<EnvironmentSpec> all = enumerate_environments();
  std::array<std::vector<std::size_t>, 4> by_class;
  for (std::size_t i = 0; i < all.size(); ++i) {
    by_class[static_cast<std::size_t>(classify_environment(all[i]).kind)].push_back(i);
  }
  Rng rng(derive_seed(seed, seed_stream::kPool));
  std::vector<std::size_t> chosen;
  for (const auto& members : by_class) {
    for (std::size_t k : rng.sample_without_replacement(members.size(), per_class)) {
      chosen.push_back(members[k]);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  EnvironmentPool pool;
  pool.seed = seed;
  for (std::size_t i : chosen) pool.specs.push_back(all[i]);
  return pool;
}

EnvironmentPool full_pool() {
  EnvironmentPool pool;
  pool.specs = enumerate_environments();
  pool.full = true;
  return pool;
}

EnvironmentPool explicit_pool(std::vector<EnvironmentSpec> specs) {
  std::vector<std::pair<std::size_t, EnvironmentSpec>> keyed;
  for (const EnvironmentSpec& s : specs) keyed.emplace_back(catalog_index(s), s);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  EnvironmentPool pool;
  for (auto& [idx, s] : keyed) pool.specs.push_back(s);
  return pool;
}

PreparedPool prepare_pool(const EnvironmentPool& pool, const TeachingContext& ctx) {
  if (pool.specs.empty()) throw ConfigError("environment pool is empty");
  if (ctx.target_index >= ctx.thetas.size()) throw ConfigError("target theta index out of range");
  PreparedPool out;
  out.thetas = ctx.thetas;
  out.target_index = ctx.target_index;
  out.examples.resize(pool.specs.size());
  parallel_for(
      pool.specs.size(), [&](std::size_t i) { out.examples[i] = make_example(pool.specs[i], ctx); },
      ctx.threads);
  return out;
}

Belief fold_examples(const LearnerSpec& spec, const std::vector<TeachingExample>& entries,
                     const std::vector<ThetaVector>& thetas, std::size_t target_index) {
  Belief b = Belief::uniform(thetas, target_index);
  for (const TeachingExample& e : entries) b = b.scaled(e.likelihoods(spec));
  return b;
}

std::vector<double> posterior_trace(const LearnerSpec& spec,
                                    const std::vector<TeachingExample>& entries,
                                    const std::vector<ThetaVector>& thetas,
                                    std::size_t target_index) {
  std::vector<double> trace;
  Belief b = Belief::uniform(thetas, target_index);
  for (const TeachingExample& e : entries) {
    b = b.scaled(e.likelihoods(spec));
    trace.push_back(b.degenerate() ? 0.0 : posterior_target_prob(b));
  }
  return trace;
}

TeachingSequence greedy_select(const LearnerSpec& spec, const PreparedPool& pool,
                               std::size_t max_n, double min_gain) {
  if (pool.size() == 0) throw ConfigError("greedy_select: empty pool");
  max_n = std::min(max_n, kMaxExamples);
  const std::vector<std::vector<double>> lik = pool_likelihoods(spec, pool);

  TeachingSequence seq;
  seq.generator = spec.id();
  Belief b = Belief::uniform(pool.thetas, pool.target_index);
  double current = posterior_target_prob(b);
  std::vector<char> allowed(pool.size(), 1);
  std::vector<char> degenerate;

  while (seq.size() < max_n) {
    const std::vector<double> post = extension_posteriors(b, lik, allowed, degenerate, 0);
    note_skipped(seq, pool, degenerate);
    const Candidate best = best_of(post, allowed, degenerate);
    if (best.index == kNone || !(best.posterior > current)) break;
    if (best.posterior - current < min_gain) break;
    b = b.scaled(lik[best.index]);
    current = best.posterior;
    allowed[best.index] = 0;
    seq.entries.push_back(pool.examples[best.index]);
    seq.posterior_trace.push_back(current);
  }
  return seq;
}

TeachingSequence coverage_augmented_select(const LearnerSpec& spec, const PreparedPool& pool,
                                           double epsilon, std::size_t max_n) {
  if (!(epsilon >= 0.0)) throw ConfigError("coverage epsilon must be >= 0");
  max_n = std::min(max_n, kMaxExamples);
  TeachingSequence seq = greedy_select(spec, pool, max_n, epsilon);
  seq.generator = "cov-" + spec.id();

  const std::vector<std::vector<double>> lik = pool_likelihoods(spec, pool);
  std::vector<char> chosen(pool.size(), 0);
  std::array<bool, kNumClusters> covered{};
  for (const TeachingExample& e : seq.entries) {
    covered[cluster_index(e.label.variant)] = true;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool.examples[i].catalog_index == e.catalog_index) chosen[i] = 1;
    }
  }
  Belief b = fold_examples(spec, seq.entries, pool.thetas, pool.target_index);

  std::vector<char> degenerate;
  for (std::size_t c = 0; c < kNumClusters; ++c) {
    if (covered[c]) continue;
    std::vector<char> allowed(pool.size(), 0);
    bool realizable = false;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!chosen[i] && cluster_index(pool.examples[i].label.variant) == c) {
        allowed[i] = 1;
        realizable = true;
      }
    }
    if (!realizable) {
      seq.uncoverable.push_back(static_cast<StrategyVariant>(c));
      continue;
    }
    if (seq.size() >= max_n) continue;
    const std::vector<double> post = extension_posteriors(b, lik, allowed, degenerate, 0);
    note_skipped(seq, pool, degenerate);
    const Candidate best = best_of(post, allowed, degenerate);
    if (best.index == kNone) {
      seq.uncoverable.push_back(static_cast<StrategyVariant>(c));
      continue;
    }
    b = b.scaled(lik[best.index]);
    chosen[best.index] = 1;
    seq.entries.push_back(pool.examples[best.index]);
    seq.posterior_trace.push_back(best.posterior);
  }
  return seq;
}

RandomBaseline random_baseline(std::uint64_t seed, const PreparedPool& pool, std::size_t n,
                               std::size_t samples) {
  if (n == 0 || samples == 0) throw ConfigError("random_baseline: n and samples must be >= 1");
  if (pool.size() < n) throw ConfigError("random_baseline: pool smaller than sequence length");
  const LearnerSpec exact = LearnerSpec::exact();
  const std::vector<std::vector<double>> lik = pool_likelihoods(exact, pool);

  RandomBaseline out;
  Rng rng(derive_seed(seed, seed_stream::kBaseline));
  out.draws.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    out.draws.push_back(rng.sample_without_replacement(pool.size(), n));
  }
  out.scores.resize(samples);
  parallel_for(samples, [&](std::size_t s) {
    Belief b = Belief::uniform(pool.thetas, pool.target_index);
    for (std::size_t i : out.draws[s]) b = b.scaled(lik[i]);
    out.scores[s] = posterior_target_prob(b);
  });
  std::vector<std::size_t> order(samples);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return out.scores[a] < out.scores[b]; });
  out.chosen_sample = order[samples / 2];
  out.sequence = sequence_from("random", pool, out.draws[out.chosen_sample], exact);
  return out;
}

TeachingSequence coverage_random(std::uint64_t seed, const PreparedPool& pool) {
  std::array<std::vector<std::size_t>, kNumClusters> members;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    members[cluster_index(pool.examples[i].label.variant)].push_back(i);
  }
  std::string missing;
  for (std::size_t c = 0; c < kNumClusters; ++c) {
    if (members[c].empty()) {
      if (!missing.empty()) missing += ",";
      missing += to_string(static_cast<StrategyVariant>(c));
    }
  }
  if (!missing.empty()) throw ConfigError("coverage_random: unrealizable clusters: " + missing);

  Rng rng(derive_seed(seed, seed_stream::kCoverageRandom));
  std::vector<std::size_t> picks;
  for (const auto& m : members) picks.push_back(m[rng.below(m.size())]);
  return sequence_from("cov-random", pool, picks, LearnerSpec::exact());
}

std::vector<double> hyperparameter_grid() {
  std::vector<double> grid;
  for (int e = -5; e <= 5; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

HyperparameterChoice select_hyperparameter(Effect effect, Metric metric, const PreparedPool& pool,
                                           const std::vector<double>& grid,
                                           double min_increase, std::size_t max_n) {
  if (effect == Effect::Exact) throw ConfigError("exact inference has no hyperparameter");
  if (grid.empty()) throw ConfigError("hyperparameter grid is empty");
  auto make_spec = [&](double v) {
    return effect == Effect::Deterministic ? LearnerSpec{Effect::Deterministic, metric, v}
                                           : LearnerSpec::probabilistic(metric, v);
  };

  HyperparameterChoice choice;
  for (double v : grid) {
    const TeachingSequence seq = greedy_select(make_spec(v), pool, max_n);
    HyperparameterTrial t;
    t.value = v;
    t.length = seq.size();
    if (!seq.posterior_trace.empty()) {
      t.increase = seq.posterior_trace.back() - seq.posterior_trace.front();
    }
    std::array<bool, kNumClusters> seen{};
    for (const TeachingExample& e : seq.entries) seen[cluster_index(e.label.variant)] = true;
    t.distinct_labels = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
    choice.trials.push_back(t);
  }

  // Smaller values win ties, so scan the grid in ascending order.
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

  std::size_t best = kNone;
  for (std::size_t i : order) {
    const HyperparameterTrial& t = choice.trials[i];
    if (t.increase < min_increase) continue;
    if (best == kNone || t.distinct_labels > choice.trials[best].distinct_labels) best = i;
  }
  if (best == kNone) {
    choice.flagged = true;
    for (std::size_t i : order) {
      if (best == kNone || choice.trials[i].increase > choice.trials[best].increase) best = i;
    }
  }
  choice.value = grid[best];
  choice.spec = make_spec(choice.value);
  return choice;
}

}  // namespace irlteach
