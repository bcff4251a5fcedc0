#include "irlteach/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "irlteach/common.hpp"
#include "irlteach/io.hpp"

namespace irlteach {
namespace {

namespace fs = std::filesystem;

void log(const std::string& msg) { std::clog << "irlteach: " << msg << '\n'; }

std::string out_path(const RunConfig& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

void ensure_out_dir(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec || !fs::is_directory(c.out_dir)) throw IoError("cannot create output directory " + c.out_dir);
}

void record_manifest(const RunConfig& c, const std::string& command,
                     const std::vector<std::string>& files) {
  const std::string path = out_path(c, "manifest.txt");
  RunManifest m;
  if (fs::exists(path)) {
    std::istringstream in(read_file(path));
    m = read_manifest(in);
  }
  m.tool_version = kToolVersion;
  m.config = config_entries(c);
  auto& digests = m.digests[command];
  digests.clear();
  for (const std::string& f : files) digests[f] = sha256_file(out_path(c, f));
  std::ostringstream out;
  write_manifest(out, m);
  write_file(path, out.str());
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::optional<double> configured_param(const RunConfig& c, Effect e, Metric m) {
  if (e == Effect::Deterministic && m == Metric::Reward) return c.det_reward_tau;
  if (e == Effect::Deterministic && m == Metric::Euclidean) return c.det_euclid_tau;
  if (e == Effect::Probabilistic && m == Metric::Reward) return c.prob_reward_lambda;
  return c.prob_euclid_lambda;
}

}  // namespace

const std::vector<std::string>& teach_model_ids() {
  static const std::vector<std::string> ids = {
      "exact",         "det-reward", "det-euclid", "prob-reward", "prob-euclid", "strategy",
      "det-strategy", "prob-strategy", "random",   "cov-random",  "cov-best"};
  return ids;
}

namespace {

ConfigError unknown_model(const std::string& model) {
  std::string known;
  for (const std::string& id : teach_model_ids()) known += (known.empty() ? "" : ",") + id;
  return ConfigError("unknown model id '" + model + "' (expected one of " + known + ")");
}

}  // namespace

Pipeline prepare_pipeline(const RunConfig& config) {
  validate(config);
  Pipeline p;
  p.config = config;
  p.context = make_context(config);
  const EnvironmentPool pool = make_pool(config);
  log("preparing " + std::to_string(pool.specs.size()) + " environments x " +
      std::to_string(p.context.thetas.size()) + " candidate objectives");
  p.pool = prepare_pool(pool, p.context);
  return p;
}

std::vector<LearnerSpec> resolve_learners(const RunConfig& config, const PreparedPool& pool,
                                          std::vector<HyperparameterChoice>* choices) {
  std::vector<LearnerSpec> learners;
  learners.push_back(LearnerSpec::exact());
  auto resolve = [&](Effect e, Metric m) {
    if (const auto v = configured_param(config, e, m)) {
      return e == Effect::Deterministic ? LearnerSpec::deterministic(m, *v)
                                        : LearnerSpec::probabilistic(m, *v);
    }
    HyperparameterChoice c =
        select_hyperparameter(e, m, pool, config.hyper_grid, config.min_increase, config.max_examples);
    const LearnerSpec spec = c.spec;
    if (choices != nullptr) choices->push_back(std::move(c));
    return spec;
  };
  learners.push_back(resolve(Effect::Deterministic, Metric::Reward));
  learners.push_back(resolve(Effect::Deterministic, Metric::Euclidean));
  learners.push_back(LearnerSpec{Effect::Deterministic, Metric::Strategy, 0.0});
  learners.push_back(resolve(Effect::Probabilistic, Metric::Reward));
  learners.push_back(resolve(Effect::Probabilistic, Metric::Euclidean));
  learners.push_back(LearnerSpec{Effect::Probabilistic, Metric::Strategy, 1.0});
  return learners;
}

GeneratedSequence generate_sequence(const std::string& model, const Pipeline& p,
                                    const std::vector<LearnerSpec>& learners) {
  const RunConfig& c = p.config;
  auto greedy = [&](const LearnerSpec& spec) {
    return GeneratedSequence{greedy_select(spec, p.pool, c.max_examples), spec};
  };
  if (model == "exact") return greedy(learners[0]);
  if (model == "det-reward") return greedy(learners[1]);
  if (model == "det-euclid") return greedy(learners[2]);
  if (model == "strategy" || model == "det-strategy") return greedy(learners[3]);
  if (model == "prob-reward") return greedy(learners[4]);
  if (model == "prob-euclid") return greedy(learners[5]);
  if (model == "prob-strategy") return greedy(learners[6]);
  if (model == "random") {
    return {random_baseline(c.seed, p.pool, c.baseline_length, c.baseline_samples).sequence,
            LearnerSpec::exact()};
  }
  if (model == "cov-random") return {coverage_random(c.seed, p.pool), LearnerSpec::exact()};
  if (model == "cov-best") {
    GeneratedSequence g{
        coverage_augmented_select(learners[2], p.pool, c.coverage_epsilon, c.max_examples),
        learners[2]};
    g.sequence.generator = "cov-best";
    return g;
  }
  throw unknown_model(model);
}

TeachingSequence load_sequence(const std::string& path, const Pipeline& p, LearnerSpec* scoring) {
  std::istringstream in(read_file(path));
  const SequenceRecord rec = read_sequence(in);
  TeachingSequence seq;
  seq.generator = rec.generator;
  for (const std::string& u : rec.uncoverable) seq.uncoverable.push_back(parse_variant(u));
  for (const SequenceEntryRecord& e : rec.entries) {
    TeachingExample ex = make_example(e.spec, p.context);
    if (!(ex.demo.states == e.trajectory.states)) {
      throw ConfigError(path + ": trajectory for environment " + std::to_string(e.catalog_index) +
                        " is not the theta*-optimal one for this configuration");
    }
    seq.entries.push_back(std::move(ex));
  }
  const LearnerSpec spec = learner_from_id(rec.learner, rec.learner_param);
  seq.posterior_trace = posterior_trace(spec, seq.entries, p.pool.thetas, p.pool.target_index);
  if (scoring != nullptr) *scoring = spec;
  return seq;
}

std::vector<std::string> cmd_enumerate(const RunConfig& config) {
  ensure_out_dir(config);
  const std::vector<EnvironmentSpec> specs = enumerate_environments();
  std::ostringstream catalog;
  write_catalog(catalog, specs);
  write_file(out_path(config, "catalog.jsonl"), catalog.str());
  std::ostringstream census;
  write_census_csv(census, class_census(specs));
  write_file(out_path(config, "census.csv"), census.str());
  const std::vector<std::string> files = {"catalog.jsonl", "census.csv"};
  record_manifest(config, "enumerate", files);
  return files;
}

std::vector<std::string> cmd_teach(const RunConfig& config, const std::string& model) {
  if (std::find(teach_model_ids().begin(), teach_model_ids().end(), model) ==
      teach_model_ids().end()) {
    throw unknown_model(model);
  }
  ensure_out_dir(config);
  const Pipeline p = prepare_pipeline(config);
  const std::vector<LearnerSpec> learners = resolve_learners(config, p.pool);
  const GeneratedSequence g = generate_sequence(model, p, learners);
  std::ostringstream out;
  write_sequence(out, to_record(g.sequence, g.scoring));
  const std::string name = "sequence-" + model + ".jsonl";
  write_file(out_path(config, name), out.str());
  record_manifest(config, "teach-" + model, {name});
  return {name};
}

std::vector<std::string> cmd_hyperparam(const RunConfig& config) {
  ensure_out_dir(config);
  const Pipeline p = prepare_pipeline(config);
  RunConfig all_auto = config;
  all_auto.det_reward_tau.reset();
  all_auto.det_euclid_tau.reset();
  all_auto.prob_reward_lambda.reset();
  all_auto.prob_euclid_lambda.reset();
  std::vector<HyperparameterChoice> choices;
  resolve_learners(all_auto, p.pool, &choices);
  std::ostringstream out;
  out << "family,value,increase,distinct_labels,length,selected,flagged\n";
  for (const HyperparameterChoice& c : choices) {
    for (const HyperparameterTrial& t : c.trials) {
      out << c.spec.id() << ',' << fmt(t.value) << ',' << fmt(t.increase) << ','
          << t.distinct_labels << ',' << t.length << ',' << (t.value == c.value ? 1 : 0) << ','
          << (c.flagged ? 1 : 0) << '\n';
    }
  }
  write_file(out_path(config, "hyperparameters.csv"), out.str());
  record_manifest(config, "hyperparam", {"hyperparameters.csv"});
  return {"hyperparameters.csv"};
}

std::vector<std::string> cmd_evaluate(const RunConfig& config,
                                      const std::vector<std::string>& sequence_files) {
  ensure_out_dir(config);
  const Pipeline p = prepare_pipeline(config);
  const std::vector<LearnerSpec> learners = resolve_learners(config, p.pool);

  std::vector<TeachingSequence> matrix_rows;
  std::vector<TeachingSequence> all;
  std::vector<LearnerSpec> scoring;
  if (sequence_files.empty()) {
    for (const char* id : {"exact", "det-reward", "det-euclid", "det-strategy", "prob-reward",
                           "prob-euclid", "prob-strategy", "random"}) {
      GeneratedSequence g = generate_sequence(id, p, learners);
      g.sequence.generator = id;
      matrix_rows.push_back(g.sequence);
      all.push_back(std::move(g.sequence));
      scoring.push_back(g.scoring);
    }
    for (const char* id : {"cov-best", "cov-random"}) {
      GeneratedSequence g = generate_sequence(id, p, learners);
      all.push_back(std::move(g.sequence));
      scoring.push_back(g.scoring);
    }
  } else {
    for (const std::string& f : sequence_files) {
      LearnerSpec spec;
      TeachingSequence seq = load_sequence(f, p, &spec);
      matrix_rows.push_back(seq);
      all.push_back(std::move(seq));
      scoring.push_back(spec);
    }
  }

  const EvalMatrix m = cross_evaluate(matrix_rows, learners, p.pool.thetas, p.pool.target_index);
  std::ostringstream matrix;
  write_matrix_csv(matrix, m);
  write_file(out_path(config, "matrix.csv"), matrix.str());

  std::vector<std::string> names;
  std::vector<TallyGrid> grids;
  std::ostringstream helpful;
  helpful << "generator,class,strategy,count\n";
  for (const TeachingSequence& s : all) {
    names.push_back(s.generator);
    grids.push_back(tally_examples_by_class(s));
    for (StrategyVariant v : test_targets()) {
      helpful << s.generator << ',' << to_string(class_of(v)) << ',' << to_string(v) << ','
              << helpful_environment_count(s, class_of(v), v) << '\n';
    }
  }
  std::ostringstream tallies;
  write_tallies_csv(tallies, names, grids);
  write_file(out_path(config, "tallies.csv"), tallies.str());
  write_file(out_path(config, "helpful.csv"), helpful.str());

  const double threshold = config.test_gap_threshold
                               ? *config.test_gap_threshold
                               : default_gap_threshold(p.pool, config.test_gap_scale);
  const TestEnvironmentSet tests = generate_test_environments(p.pool, p.context, threshold, config.seed);
  std::ostringstream test_env;
  write_test_environments(test_env, tests);
  write_file(out_path(config, "test_environments.jsonl"), test_env.str());

  std::ostringstream answers;
  answers << "generator,learner,target,covered,posterior,chosen,correct\n";
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const AnswerCheck& a :
         simulated_test_answers(all[i], scoring[i], p.pool.thetas, p.pool.target_index, tests)) {
      answers << a.generator << ',' << scoring[i].id() << ',' << to_string(a.target) << ','
              << (a.covered ? 1 : 0) << ',' << fmt(a.posterior) << ',' << a.chosen << ','
              << (a.correct ? 1 : 0) << '\n';
    }
  }
  write_file(out_path(config, "test_answers.csv"), answers.str());

  std::vector<std::string> learner_ids;
  std::vector<Belief> beliefs;
  for (std::size_t i = 0; i < all.size(); ++i) {
    learner_ids.push_back(scoring[i].id());
    beliefs.push_back(fold_examples(scoring[i], all[i].entries, p.pool.thetas, p.pool.target_index));
  }
  std::ostringstream belief_rows;
  write_beliefs_csv(belief_rows, names, learner_ids, beliefs);
  write_file(out_path(config, "beliefs.csv"), belief_rows.str());

  const std::vector<std::string> files = {"matrix.csv",       "tallies.csv",
                                          "helpful.csv",      "test_environments.jsonl",
                                          "test_answers.csv", "beliefs.csv"};
  record_manifest(config, "evaluate", files);
  return files;
}

std::vector<std::string> cmd_export_trajectories(const RunConfig& config,
                                                 const std::vector<std::size_t>& env_indices) {
  ensure_out_dir(config);
  validate(config);
  const TeachingContext ctx = make_context(config);
  std::vector<EnvironmentSpec> specs;
  if (env_indices.empty()) {
    specs = make_pool(config).specs;
  } else {
    const std::vector<EnvironmentSpec> all = enumerate_environments();
    for (std::size_t i : env_indices) {
      if (i >= all.size()) throw ConfigError("environment index out of range: " + std::to_string(i));
      specs.push_back(all[i]);
    }
  }
  std::vector<std::string> lines(specs.size());
  parallel_for(
      specs.size(),
      [&](std::size_t k) {
        const Environment env = instantiate(specs[k], ctx.environment);
        const EnvironmentEvidence ev =
            build_evidence(env, ctx.thetas, ctx.target_index, ctx.optimizer);
        std::string block;
        for (std::size_t j = 0; j < ev.set.size(); ++j) {
          const ManeuverTemplate& t = ev.set.templates[j];
          nlohmann::json rec{
              {"index", catalog_index(specs[k])},
              {"candidate", j},
              {"refined", j >= ev.set.library_size},
              {"target_lane", to_string(t.target_lane)},
              {"lane_change_start",
               t.lane_change_start ? nlohmann::json(*t.lane_change_start) : nlohmann::json(nullptr)},
              {"accel", t.accel},
              {"strategy", to_string(ev.set.labels[j].variant)},
              {"demo", j == ev.demo_index},
              {"theta_star_gap", ev.target_gaps[j]},
              {"features", ev.set.features[j].values},
              {"reward_theta_star", reward(ctx.thetas[ctx.target_index], ev.set.features[j])},
              {"trajectory", nlohmann::json::parse(trajectory_json(ev.set.trajectories[j]))}};
          block += rec.dump() + "\n";
        }
        lines[k] = std::move(block);
      },
      config.threads);
  std::string out;
  for (const std::string& l : lines) out += l;
  write_file(out_path(config, "trajectories.jsonl"), out);
  record_manifest(config, "export-trajectories", {"trajectories.jsonl"});
  return {"trajectories.jsonl"};
}

}  // namespace irlteach
