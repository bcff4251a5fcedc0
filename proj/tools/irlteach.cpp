// Command-line driver: enumerate | teach | evaluate | hyperparam | export-trajectories

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "irlteach/commands.hpp"
#include "irlteach/common.hpp"
#include "irlteach/io.hpp"
#include "irlteach/run_config.hpp"

namespace {

int report(const char* kind, const std::string& message, int code) {
  const nlohmann::json line{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << line.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace irlteach;

  CLI::App app{"Teaching reward functions to approximate-inference learners"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> pool_mode;
  std::optional<std::string> out_dir;
  app.add_option("--config", config_path, "flat key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "run seed (overrides config and IRLTEACH_SEED)");
  app.add_option("--pool", pool_mode, "environment pool")->check(CLI::IsMember({"sample", "full"}));
  app.add_option("--out", out_dir, "output directory (overrides config and IRLTEACH_OUT)");

  auto* enumerate = app.add_subcommand("enumerate", "write the environment catalog and class census");

  std::string model;
  auto* teach = app.add_subcommand("teach", "generate one teaching sequence");
  teach->add_option("--model", model, "model id")->required();

  std::vector<std::string> sequence_files;
  auto* evaluate = app.add_subcommand(
      "evaluate", "cross-evaluation matrix, tallies, test environments and simulated answers");
  evaluate->add_option("sequences", sequence_files, "sequence files (default: generate all)")
      ->check(CLI::ExistingFile);

  auto* hyperparam = app.add_subcommand("hyperparam", "tau/lambda selection table");

  std::vector<std::size_t> env_indices;
  auto* export_cmd = app.add_subcommand("export-trajectories",
                                        "candidate trajectories of environments (default: pool)");
  export_cmd->add_option("--env", env_indices, "catalog index (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), 2);
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config = load_run_config(config_path);
    apply_environment_overrides(config);
    if (seed) config.seed = *seed;
    if (out_dir) config.out_dir = *out_dir;
    if (pool_mode) config.pool_mode = *pool_mode == "full" ? PoolMode::Full : PoolMode::Sample;
    validate(config);

    std::vector<std::string> written;
    if (*enumerate) written = cmd_enumerate(config);
    if (*teach) written = cmd_teach(config, model);
    if (*evaluate) written = cmd_evaluate(config, sequence_files);
    if (*hyperparam) written = cmd_hyperparam(config);
    if (*export_cmd) written = cmd_export_trajectories(config, env_indices);
    for (const std::string& f : written) std::cout << config.out_dir << '/' << f << '\n';
    return 0;
  } catch (const ConfigError& e) {
    return report("config", e.what(), 2);
  } catch (const IoError& e) {
    return report("io", e.what(), 3);
  } catch (const DomainError& e) {
    return report("domain", e.what(), 4);
  } catch (const DegenerateBelief& e) {
    return report("degenerate", e.what(), 5);
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
}
