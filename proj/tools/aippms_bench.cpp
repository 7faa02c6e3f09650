#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "aippms/experiment.hpp"

namespace {

int run(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
        const std::vector<std::string>& policies, std::optional<std::size_t> trials, std::optional<std::size_t> parallel,
        bool no_timing, bool quiet) {
  std::ifstream f(config_path);
  if (!f) {
    std::cerr << "error: cannot open " << config_path << "\n";
    return 2;
  }
  aippms::ExperimentConfig config = aippms::parse_experiment(nlohmann::json::parse(f));
  if (seed) config.seed = *seed;
  if (trials) config.trials = *trials;
  if (parallel) config.parallel = *parallel;
  if (no_timing) config.record_timing = false;
  if (!policies.empty()) aippms::filter_policies(config, policies);
  config.validate();

  const auto result = aippms::run_suite(config, quiet ? nullptr : &std::cerr);
  aippms::write_outputs(config, result, out_dir);
  std::cout << aippms::summary_table(config, result);
  if (result.failures > 0) {
    std::cerr << result.failures << " trial(s) failed; see " << out_dir << "/results.json\n";
    return 1;
  }
  return 0;
}

int verify(const std::string& out_dir) {
  const auto report = aippms::verify_outputs(out_dir);
  for (const auto& m : report.messages) (report.ok ? std::cout : std::cerr) << m << "\n";
  return report.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded experiment runner for adaptive informative path planning with multimodal sensing"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> policies;
  std::optional<std::size_t> trials, parallel;
  bool no_timing = false, quiet = false;

  auto* run_cmd = app.add_subcommand("run", "Run every (setting, policy, trial) of an experiment file");
  run_cmd->add_option("--config", config_path, "Experiment JSON file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--seed", seed, "Override the master seed");
  run_cmd->add_option("--policies", policies, "Policy ids or families to keep (comma separated)")->delimiter(',');
  run_cmd->add_option("--trials", trials, "Override trials per setting")->check(CLI::PositiveNumber);
  run_cmd->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--no-timing", no_timing, "Write 0 to mean_plan_seconds so the CSV is byte-reproducible");
  run_cmd->add_flag("--quiet", quiet, "Suppress per-trial progress lines");

  std::string verify_dir;
  auto* verify_cmd = app.add_subcommand("verify", "Recompute aggregates from trials.csv and check invariants");
  verify_cmd->add_option("--out", verify_dir, "Output directory of a previous run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(config_path, out_dir, seed, policies, trials, parallel, no_timing, quiet);
    return verify(verify_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
