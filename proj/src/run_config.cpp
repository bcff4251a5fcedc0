#include "irlteach/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "irlteach/common.hpp"

namespace irlteach {
namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("config: " + key + ": not a finite number: '" + v + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("config: " + key + ": not a non-negative integer: '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError("config: " + key + ": expected true/false: '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

std::string fmt_list(const double* v, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

std::optional<double> parse_auto(const std::string& key, const std::string& v) {
  if (v == "auto") return std::nullopt;
  return parse_double(key, v);
}

std::string fmt_auto(const std::optional<double>& v) { return v ? fmt(*v) : "auto"; }

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define IRLT_DOUBLE(name, member)                                              \
  Field {                                                                      \
    name, [](const RunConfig& c) { return fmt(c.member); },                    \
        [](RunConfig& c, const std::string& v) { c.member = parse_double(name, v); } \
  }
#define IRLT_SIZE(name, member)                                                \
  Field {                                                                      \
    name, [](const RunConfig& c) { return fmt(static_cast<std::uint64_t>(c.member)); }, \
        [](RunConfig& c, const std::string& v) {                               \
          c.member = static_cast<decltype(c.member)>(parse_uint(name, v));     \
        }                                                                      \
  }
#define IRLT_AUTO(name, member)                                                \
  Field {                                                                      \
    name, [](const RunConfig& c) { return fmt_auto(c.member); },               \
        [](RunConfig& c, const std::string& v) { c.member = parse_auto(name, v); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      IRLT_SIZE("seed", seed),
      IRLT_SIZE("theta_count", theta_count),
      {"theta_lo", [](const RunConfig& c) { return fmt_list(c.theta_bounds.lo.data(), kNumFeatures); },
       [](RunConfig& c, const std::string& v) {
         const auto l = parse_list("theta_lo", v);
         if (l.size() != kNumFeatures) throw ConfigError("config: theta_lo needs 5 values");
         std::copy(l.begin(), l.end(), c.theta_bounds.lo.begin());
       }},
      {"theta_hi", [](const RunConfig& c) { return fmt_list(c.theta_bounds.hi.data(), kNumFeatures); },
       [](RunConfig& c, const std::string& v) {
         const auto l = parse_list("theta_hi", v);
         if (l.size() != kNumFeatures) throw ConfigError("config: theta_hi needs 5 values");
         std::copy(l.begin(), l.end(), c.theta_bounds.hi.begin());
       }},
      {"pool", [](const RunConfig& c) { return to_string(c.pool_mode); },
       [](RunConfig& c, const std::string& v) {
         if (v == "sample") c.pool_mode = PoolMode::Sample;
         else if (v == "full") c.pool_mode = PoolMode::Full;
         else throw ConfigError("config: pool must be sample or full: '" + v + "'");
       }},
      IRLT_SIZE("pool_per_class", pool_per_class),
      IRLT_DOUBLE("dt", environment.dt),
      IRLT_SIZE("horizon", environment.horizon),
      IRLT_DOUBLE("lane_width", environment.lane_width),
      IRLT_DOUBLE("robot_v0", environment.robot_v0),
      IRLT_DOUBLE("wheelbase", dynamics.wheelbase),
      IRLT_DOUBLE("alpha_max", dynamics.alpha_max),
      IRLT_DOUBLE("u1_max", dynamics.u1_max),
      IRLT_DOUBLE("u2_max", dynamics.u2_max),
      IRLT_DOUBLE("discount", features.discount),
      IRLT_DOUBLE("sigma_major_lanes", features.sigma_major_lanes),
      IRLT_DOUBLE("sigma_minor_lanes", features.sigma_minor_lanes),
      IRLT_DOUBLE("forward_goal_distance", features.forward_goal_distance),
      {"local_refinement", [](const RunConfig& c) { return std::string(c.local_refinement ? "true" : "false"); },
       [](RunConfig& c, const std::string& v) { c.local_refinement = parse_bool("local_refinement", v); }},
      IRLT_SIZE("refinement_blocks", refinement_blocks),
      IRLT_SIZE("refinement_iterations", refinement_iterations),
      {"hyper_grid", [](const RunConfig& c) { return fmt_list(c.hyper_grid.data(), c.hyper_grid.size()); },
       [](RunConfig& c, const std::string& v) { c.hyper_grid = parse_list("hyper_grid", v); }},
      IRLT_DOUBLE("min_increase", min_increase),
      IRLT_SIZE("max_examples", max_examples),
      IRLT_DOUBLE("coverage_epsilon", coverage_epsilon),
      IRLT_SIZE("baseline_length", baseline_length),
      IRLT_SIZE("baseline_samples", baseline_samples),
      IRLT_DOUBLE("test_gap_scale", test_gap_scale),
      IRLT_AUTO("test_gap_threshold", test_gap_threshold),
      IRLT_AUTO("det_reward_tau", det_reward_tau),
      IRLT_AUTO("det_euclid_tau", det_euclid_tau),
      IRLT_AUTO("prob_reward_lambda", prob_reward_lambda),
      IRLT_AUTO("prob_euclid_lambda", prob_euclid_lambda),
      IRLT_SIZE("threads", threads),
      {"out", [](const RunConfig& c) { return c.out_dir; },
       [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
  };
  return table;
}

#undef IRLT_DOUBLE
#undef IRLT_SIZE
#undef IRLT_AUTO

}  // namespace

std::string to_string(PoolMode mode) { return mode == PoolMode::Full ? "full" : "sample"; }

RunConfig parse_run_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool known = false;
    for (const Field& f : fields()) {
      if (key == f.key) {
        f.set(base, value);
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  return parse_run_config(in, std::move(base));
}

void apply_environment_overrides(RunConfig& config) {
  if (const char* seed = std::getenv("IRLTEACH_SEED"); seed != nullptr && *seed != '\0') {
    config.seed = parse_uint("IRLTEACH_SEED", seed);
  }
  if (const char* out = std::getenv("IRLTEACH_OUT"); out != nullptr && *out != '\0') {
    config.out_dir = out;
  }
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("config: ") + what);
  };
  require(c.theta_count >= 1, "theta_count must be >= 1");
  for (std::size_t k = 0; k < kNumFeatures; ++k) {
    require(c.theta_bounds.lo[k] <= c.theta_bounds.hi[k], "theta_lo must not exceed theta_hi");
  }
  require(c.pool_per_class >= 1, "pool_per_class must be >= 1");
  require(c.environment.dt > 0.0, "dt must be > 0");
  require(c.environment.horizon >= 1, "horizon must be >= 1");
  require(c.environment.lane_width > 0.0, "lane_width must be > 0");
  require(c.environment.robot_v0 >= 0.0, "robot_v0 must be >= 0");
  require(c.dynamics.wheelbase > 0.0, "wheelbase must be > 0");
  require(c.dynamics.alpha_max > 0.0 && c.dynamics.u1_max > 0.0 && c.dynamics.u2_max > 0.0,
          "control bounds must be > 0");
  require(c.features.discount > 0.0, "discount must be > 0");
  require(c.features.sigma_major_lanes > 0.0 && c.features.sigma_minor_lanes > 0.0,
          "kernel widths must be > 0");
  require(c.refinement_blocks >= 1, "refinement_blocks must be >= 1");
  require(!c.hyper_grid.empty(), "hyper_grid must not be empty");
  for (double v : c.hyper_grid) require(v > 0.0, "hyper_grid values must be > 0");
  require(c.max_examples >= 1 && c.max_examples <= kMaxExamples, "max_examples must be in 1..10");
  require(c.coverage_epsilon >= 0.0, "coverage_epsilon must be >= 0");
  require(c.baseline_length >= 1 && c.baseline_samples >= 1, "baseline sizes must be >= 1");
  require(c.test_gap_scale > 0.0, "test_gap_scale must be > 0");
  require(!c.test_gap_threshold || *c.test_gap_threshold >= 0.0, "test_gap_threshold must be >= 0");
  for (const auto* p : {&c.det_reward_tau, &c.det_euclid_tau}) {
    require(!*p || **p >= 0.0, "tau must be >= 0");
  }
  for (const auto* p : {&c.prob_reward_lambda, &c.prob_euclid_lambda}) {
    require(!*p || **p > 0.0, "lambda must be > 0");
  }
  require(!c.out_dir.empty(), "out must not be empty");
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Field& f : fields()) out.emplace_back(f.key, f.get(config));
  return out;
}

std::string format_run_config(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : config_entries(config)) out += k + " = " + v + "\n";
  return out;
}

TeachingContext make_context(const RunConfig& c) {
  TeachingContext ctx;
  ctx.thetas = sample_candidate_thetas(c.theta_count, derive_seed(c.seed, seed_stream::kThetas),
                                       c.theta_bounds);
  ctx.target_index = c.theta_count;
  ctx.environment = c.environment;
  ctx.optimizer.dynamics = c.dynamics;
  ctx.optimizer.features = c.features;
  ctx.optimizer.local_refinement = c.local_refinement;
  ctx.optimizer.refinement_blocks = c.refinement_blocks;
  ctx.optimizer.refinement_iterations = c.refinement_iterations;
  ctx.threads = c.threads;
  return ctx;
}

EnvironmentPool make_pool(const RunConfig& c) {
  if (c.pool_mode == PoolMode::Full) return full_pool();
  return stratified_pool(c.seed, c.pool_per_class);
}

}  // namespace irlteach
