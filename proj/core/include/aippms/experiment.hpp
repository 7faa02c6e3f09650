#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aippms/baseline_naive.hpp"
#include "aippms/domains.hpp"
#include "aippms/solver_pomcp.hpp"

namespace aippms {

enum class PolicyKind { Pomcp, Naive };

/// One runnable policy. `family` groups the members of a lambda sweep
/// ("naive"); for every other policy it equals `id`.
struct PolicySpec {
  std::string id;
  std::string family;
  PolicyKind kind = PolicyKind::Pomcp;
  PlannerConfig planner;
  NaiveConfig naive;
};

/// A row of the results table: a fully resolved domain configuration.
struct Setting {
  std::string id;
  sar::Config sar;
  isrs::Config isrs;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Domain domain = Domain::Sar;
  std::vector<Setting> settings;
  std::vector<PolicySpec> policies;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  std::size_t parallel = 1;
  bool record_timing = true;  // false writes 0 to mean_plan_seconds
  bool save_traces = true;

  void validate() const;
};

/// Parses an experiment file. Settings override keys of the "base" domain
/// block; policies may be given as objects or as the shorthand strings
/// "pomcp_gcb", "pomcp_random" and "naive". A naive "lambda" list expands
/// into one policy per value. Throws ConfigError.
ExperimentConfig parse_experiment(const nlohmann::json& doc);

/// Fully resolved configuration, including every default.
nlohmann::json to_json(const ExperimentConfig& config);

nlohmann::json sar_config_to_json(const sar::Config& config);
nlohmann::json isrs_config_to_json(const isrs::Config& config);
sar::Config sar_config_from_json(const nlohmann::json& j, sar::Config base = {});
isrs::Config isrs_config_from_json(const nlohmann::json& j, isrs::Config base = {});

/// Keeps only the policies whose id or family appears in `names`.
/// Throws ConfigError when a name matches nothing.
void filter_policies(ExperimentConfig& config, const std::vector<std::string>& names);

struct TraceStep {
  Action action;
  Observation observation;
  double reward = 0.0;
  Energy cost = 0.0;
};

struct TrialResult {
  std::string setting_id;
  std::string policy_id;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double utility = 0.0;
  Energy energy_spent = 0.0;
  Energy budget = 0.0;
  bool reached_goal = false;
  std::size_t steps = 0;
  double mean_plan_seconds = 0.0;
  std::vector<TraceStep> trace;
  std::optional<std::string> error;
};

/// Per-trial seed. Instance generation, observation noise and each policy's
/// own stream are derived from it, so adding a policy never perturbs the
/// instance or the noise seen by the others.
std::uint64_t trial_seed(std::uint64_t master, std::size_t setting_index, std::size_t trial);

/// Instance for (setting, trial seed); identical for every policy.
Instance generate_instance(Domain domain, const Setting& setting, std::uint64_t seed);

/// Runs one episode until no feasible action remains. Throws InvalidAction
/// when the start state cannot reach the goal.
TrialResult run_trial(const Problem& problem, const WorldState& world, const PolicySpec& policy, std::uint64_t seed,
                      bool record_timing = true);

struct Aggregate {
  std::string setting_id;
  std::string policy_id;
  std::size_t n = 0;
  std::size_t errors = 0;
  double mean = 0.0;
  double sem = 0.0;
  bool sem_flag = false;  // sem > 10% of |mean|
};

/// Per-(setting, policy) statistics over completed trials, in config order.
std::vector<Aggregate> aggregate(const ExperimentConfig& config, const std::vector<TrialResult>& trials);

/// For each setting, the best member of every multi-member family, relabelled
/// with the family id.
std::vector<Aggregate> best_of_families(const ExperimentConfig& config, const std::vector<Aggregate>& aggregates);

struct SuiteResult {
  std::vector<TrialResult> trials;  // ordered by (setting, policy, trial)
  std::vector<Aggregate> aggregates;
  std::vector<Aggregate> family_best;
  std::size_t failures = 0;
};

/// Runs every (setting, policy, trial). Trial errors are recorded and the
/// suite continues. `progress` receives one line per finished trial.
SuiteResult run_suite(const ExperimentConfig& config, std::ostream* progress = nullptr);

std::string format_csv(const std::vector<TrialResult>& trials);
std::string summary_table(const ExperimentConfig& config, const SuiteResult& result);

/// Writes trials.csv, results.json, summary.txt and (optionally)
/// traces.jsonl into dir.
void write_outputs(const ExperimentConfig& config, const SuiteResult& result, const std::filesystem::path& dir);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> messages;
};

/// Recomputes the aggregates of results.json from trials.csv and checks the
/// per-trial feasibility invariants.
VerifyReport verify_outputs(const std::filesystem::path& dir);

}  // namespace aippms
