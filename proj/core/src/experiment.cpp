#include "aippms/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "aippms/problem_io.hpp"

namespace aippms {

using nlohmann::json;

namespace {

constexpr double kSemFlagFraction = 0.10;

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

std::vector<SensorSpec> sensors_from_json(const json& j) {
  std::vector<SensorSpec> out;
  for (const auto& s : j) out.push_back(sensor_from_json(s));
  return out;
}

json sensors_to_json(std::span<const SensorSpec> sensors) {
  json out = json::array();
  for (const auto& s : sensors) out.push_back(sensor_to_json(s));
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

RolloutPolicy rollout_from_string(const std::string& s) {
  if (s == "gcb") return RolloutPolicy::Gcb;
  if (s == "random") return RolloutPolicy::Random;
  throw ConfigError("unknown rollout policy '" + s + "'");
}

PlannerConfig default_planner(Domain domain, RolloutPolicy rollout) {
  PlannerConfig p;
  p.ucb_c = domain == Domain::Sar ? 50.0 : 10.0;
  p.rollout = rollout;
  return p;
}

PlannerConfig planner_from_json(const json& j, PlannerConfig p) {
  read_if(j, "n_simulations", p.n_simulations);
  read_if(j, "ucb_c", p.ucb_c);
  read_if(j, "gamma", p.gamma);
  read_if(j, "epsilon", p.epsilon);
  read_if(j, "ig_samples", p.ig_samples);
  read_if(j, "softmax_temperature", p.softmax_temperature);
  read_if(j, "normalize_utilities", p.normalize_utilities);
  read_if(j, "positive_support", p.positive_support);
  if (const auto it = j.find("rollout"); it != j.end()) p.rollout = rollout_from_string(it->get<std::string>());
  p.validate();
  return p;
}

json planner_to_json(const PlannerConfig& p) {
  return {{"n_simulations", p.n_simulations},
          {"ucb_c", p.ucb_c},
          {"gamma", p.gamma},
          {"epsilon", p.epsilon},
          {"rollout", to_string(p.rollout)},
          {"ig_samples", p.ig_samples},
          {"softmax_temperature", p.softmax_temperature},
          {"normalize_utilities", p.normalize_utilities},
          {"positive_support", p.positive_support}};
}

std::vector<PolicySpec> policies_from_json(const json& j, Domain domain) {
  std::vector<PolicySpec> out;
  for (const auto& item : j) {
    json obj = item.is_string() ? json{{"type", item.get<std::string>()}} : item;
    auto type = obj.at("type").get<std::string>();
    if (type == "pomcp_gcb" || type == "pomcp_random") {
      obj["rollout"] = type == "pomcp_gcb" ? "gcb" : "random";
      if (!obj.contains("id")) obj["id"] = type;
      type = "pomcp";
    }
    if (type == "pomcp") {
      PolicySpec p;
      p.kind = PolicyKind::Pomcp;
      p.planner = planner_from_json(obj, default_planner(domain, RolloutPolicy::Gcb));
      p.id = obj.value("id", "pomcp_" + to_string(p.planner.rollout));
      p.family = p.id;
      out.push_back(std::move(p));
    } else if (type == "naive") {
      NaiveConfig base;
      read_if(obj, "ig_samples", base.ig_samples);
      read_if(obj, "max_insertions", base.max_insertions);
      const std::string id = obj.value("id", std::string("naive"));
      std::vector<double> lambdas{base.lambda};
      if (const auto it = obj.find("lambda"); it != obj.end())
        lambdas = it->is_array() ? it->get<std::vector<double>>() : std::vector<double>{it->get<double>()};
      if (lambdas.empty()) throw ConfigError("naive: lambda list is empty");
      for (double lambda : lambdas) {
        PolicySpec p;
        p.kind = PolicyKind::Naive;
        p.naive = base;
        p.naive.lambda = lambda;
        p.naive.validate();
        p.family = obj.value("family", id);
        p.id = lambdas.size() == 1 ? id : id + "_l" + format_double(lambda);
        out.push_back(std::move(p));
      }
    } else {
      throw ConfigError("unknown policy type '" + type + "'");
    }
  }
  return out;
}

std::vector<PolicySpec> default_policies(Domain domain) {
  return policies_from_json(json::array({"pomcp_gcb", "pomcp_random", json{{"type", "naive"}, {"lambda", {0.25, 0.5, 0.75}}}}),
                            domain);
}

json policy_to_json(const PolicySpec& p) {
  json j{{"id", p.id}, {"family", p.family}};
  if (p.kind == PolicyKind::Pomcp) {
    j["type"] = "pomcp";
    j.update(planner_to_json(p.planner));
  } else {
    j["type"] = "naive";
    j["lambda"] = p.naive.lambda;
    j["ig_samples"] = p.naive.ig_samples;
    j["max_insertions"] = p.naive.max_insertions;
  }
  return j;
}

bool valid_id(const std::string& id) {
  return !id.empty() && id.find_first_of(",\"\n\r") == std::string::npos;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

sar::Config sar_config_from_json(const json& j, sar::Config c) {
  read_if(j, "n_nodes", c.n_nodes);
  if (const auto it = j.find("rho_range"); it != j.end()) {
    const auto r = it->get<std::vector<double>>();
    if (r.size() != 2) throw ConfigError("sar: rho_range needs two values");
    c.rho_min = r[0];
    c.rho_max = r[1];
  }
  read_if(j, "distribution", c.distribution);
  read_if(j, "coverage_radii", c.coverage_radii);
  read_if(j, "grid_resolution", c.grid_resolution);
  read_if(j, "budget_fraction", c.budget_fraction);
  read_if(j, "max_resamples", c.max_resamples);
  if (const auto it = j.find("sensors"); it != j.end()) c.sensors = sensors_from_json(*it);
  c.validate();
  return c;
}

isrs::Config isrs_config_from_json(const json& j, isrs::Config c) {
  read_if(j, "grid", c.grid);
  read_if(j, "rocks", c.rocks);
  read_if(j, "beacons", c.beacons);
  read_if(j, "p_good", c.p_good);
  read_if(j, "budget", c.budget);
  read_if(j, "move_cost", c.move_cost);
  read_if(j, "rock_reward", c.rock_reward);
  if (const auto it = j.find("movement"); it != j.end()) c.movement = isrs::movement_from_string(it->get<std::string>());
  if (const auto it = j.find("sensors"); it != j.end()) c.sensors = sensors_from_json(*it);
  if (const auto it = j.find("origin"); it != j.end() && !it->is_null()) {
    const auto xy = it->get<std::vector<int>>();
    if (xy.size() != 2) throw ConfigError("isrs: origin needs two coordinates");
    c.origin = isrs::Cell{xy[0], xy[1]};
  }
  c.validate();
  return c;
}

json sar_config_to_json(const sar::Config& c) {
  return {{"n_nodes", c.n_nodes},
          {"rho_range", {c.rho_min, c.rho_max}},
          {"distribution", c.distribution},
          {"coverage_radii", c.coverage_radii},
          {"grid_resolution", c.grid_resolution},
          {"budget_fraction", c.budget_fraction},
          {"max_resamples", c.max_resamples},
          {"sensors", sensors_to_json(c.sensors)}};
}

json isrs_config_to_json(const isrs::Config& c) {
  const isrs::Cell origin = c.origin.value_or(isrs::Cell{0, c.grid / 2});
  return {{"grid", c.grid},
          {"rocks", c.rocks},
          {"beacons", c.beacons},
          {"p_good", c.p_good},
          {"budget", c.budget},
          {"move_cost", c.move_cost},
          {"rock_reward", c.rock_reward},
          {"origin", {origin.x, origin.y}},
          {"movement", isrs::to_string(c.movement)},
          {"sensors", sensors_to_json(c.sensors)}};
}

void ExperimentConfig::validate() const {
  if (domain == Domain::Custom) throw ConfigError("experiment: domain must be sar or isrs");
  if (trials < 1) throw ConfigError("experiment: trials must be at least 1");
  if (policies.empty()) throw ConfigError("experiment: policy list is empty");
  if (settings.empty()) throw ConfigError("experiment: setting list is empty");
  if (parallel < 1) throw ConfigError("experiment: parallel must be at least 1");
  std::vector<std::string> ids;
  for (const auto& s : settings) {
    if (!valid_id(s.id)) throw ConfigError("experiment: invalid setting id '" + s.id + "'");
    ids.push_back("s:" + s.id);
  }
  for (const auto& p : policies) {
    if (!valid_id(p.id)) throw ConfigError("experiment: invalid policy id '" + p.id + "'");
    ids.push_back("p:" + p.id);
  }
  std::sort(ids.begin(), ids.end());
  if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
    throw ConfigError("experiment: duplicate id '" + dup->substr(2) + "'");
}

ExperimentConfig parse_experiment(const json& doc) {
  try {
    ExperimentConfig c;
    read_if(doc, "name", c.name);
    const auto domain = doc.at("domain").get<std::string>();
    if (domain == "sar") {
      c.domain = Domain::Sar;
    } else if (domain == "isrs") {
      c.domain = Domain::Isrs;
    } else {
      throw ConfigError("experiment: unknown domain '" + domain + "'");
    }
    const json base = doc.value("base", json::object());
    const json settings = doc.value("settings", json::array({json{{"id", "default"}}}));
    for (const auto& s : settings) {
      Setting setting;
      setting.id = s.at("id").get<std::string>();
      json merged = base;
      merged.update(s);
      if (c.domain == Domain::Sar)
        setting.sar = sar_config_from_json(merged);
      else
        setting.isrs = isrs_config_from_json(merged);
      c.settings.push_back(std::move(setting));
    }
    c.policies = doc.contains("policies") ? policies_from_json(doc.at("policies"), c.domain) : default_policies(c.domain);
    read_if(doc, "trials", c.trials);
    read_if(doc, "seed", c.seed);
    read_if(doc, "parallel", c.parallel);
    read_if(doc, "record_timing", c.record_timing);
    read_if(doc, "save_traces", c.save_traces);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment: malformed JSON: ") + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  json settings = json::array();
  for (const auto& s : c.settings) {
    json j = c.domain == Domain::Sar ? sar_config_to_json(s.sar) : isrs_config_to_json(s.isrs);
    j["id"] = s.id;
    settings.push_back(std::move(j));
  }
  json policies = json::array();
  for (const auto& p : c.policies) policies.push_back(policy_to_json(p));
  return {{"name", c.name},
          {"domain", to_string(c.domain)},
          {"settings", std::move(settings)},
          {"policies", std::move(policies)},
          {"trials", c.trials},
          {"seed", c.seed},
          {"parallel", c.parallel},
          {"record_timing", c.record_timing},
          {"save_traces", c.save_traces}};
}

void filter_policies(ExperimentConfig& config, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    const bool found = std::any_of(config.policies.begin(), config.policies.end(),
                                   [&](const PolicySpec& p) { return p.id == name || p.family == name; });
    if (!found) throw ConfigError("no policy matches '" + name + "'");
  }
  std::erase_if(config.policies, [&](const PolicySpec& p) {
    return std::none_of(names.begin(), names.end(), [&](const std::string& n) { return p.id == n || p.family == n; });
  });
}

// ---------------------------------------------------------------------------
// Trials

std::uint64_t trial_seed(std::uint64_t master, std::size_t setting_index, std::size_t trial) {
  return derive_seed(master, {setting_index, trial});
}

Instance generate_instance(Domain domain, const Setting& setting, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0}));
  if (domain == Domain::Sar) return sar::generate(setting.sar, rng);
  if (domain == Domain::Isrs) return isrs::generate(setting.isrs, rng);
  throw ConfigError("generate_instance: custom domains have no generator");
}

TrialResult run_trial(const Problem& problem, const WorldState& world, const PolicySpec& policy, std::uint64_t seed,
                      bool record_timing) {
  using Clock = std::chrono::steady_clock;
  TrialResult result;
  result.policy_id = policy.id;
  result.seed = seed;
  result.budget = problem.budget();

  AgentState state = problem.initial_state();
  if (!is_feasible_state(state, problem.costs(), problem.goal()))
    throw InvalidAction("infeasible instance: budget is below the start-to-goal cost");

  Rng env_rng(derive_seed(seed, {1}));
  Rng policy_rng(derive_seed(seed, {2, fnv1a64(policy.id)}));
  // The start counts as visited: its utility is credited and its state revealed.
  WorldBelief belief = problem.prior();
  const NodeId start = state.current;
  belief.set_point_mass(start, problem.sensor_model().state_after_visit(start, world.at(start)));
  result.utility = problem.utility().value(state.visited, world);
  double plan_seconds = 0.0;

  while (!is_terminal(problem, state)) {
    const auto t0 = record_timing ? Clock::now() : Clock::time_point{};
    const Action a = policy.kind == PolicyKind::Pomcp ? plan(problem, state, belief, policy.planner, policy_rng)
                                                      : naive_action(problem, state, belief, policy.naive, policy_rng);
    if (record_timing) plan_seconds += std::chrono::duration<double>(Clock::now() - t0).count();

    StepOutcome out = step(problem, state, world, a, env_rng);
    apply_observation(problem, belief, state, out.observation);
    result.utility += out.reward;
    result.energy_spent += out.cost;
    result.trace.push_back({a, std::move(out.observation), out.reward, out.cost});
    state = std::move(out.next_state);
  }
  result.steps = result.trace.size();
  result.reached_goal = state.current == problem.goal();
  result.mean_plan_seconds = result.steps > 0 && record_timing ? plan_seconds / static_cast<double>(result.steps) : 0.0;
  return result;
}

// ---------------------------------------------------------------------------
// Suite

std::vector<Aggregate> aggregate(const ExperimentConfig& config, const std::vector<TrialResult>& trials) {
  std::vector<Aggregate> out;
  for (const auto& s : config.settings) {
    for (const auto& p : config.policies) {
      Aggregate a{s.id, p.id};
      std::vector<double> xs;
      for (const auto& t : trials) {
        if (t.setting_id != s.id || t.policy_id != p.id) continue;
        if (t.error)
          ++a.errors;
        else
          xs.push_back(t.utility);
      }
      a.n = xs.size();
      if (a.n > 0) {
        double sum = 0.0;
        for (double x : xs) sum += x;
        a.mean = sum / static_cast<double>(a.n);
      }
      if (a.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - a.mean) * (x - a.mean);
        a.sem = std::sqrt(ss / static_cast<double>(a.n - 1)) / std::sqrt(static_cast<double>(a.n));
      }
      a.sem_flag = a.sem > kSemFlagFraction * std::abs(a.mean);
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<Aggregate> best_of_families(const ExperimentConfig& config, const std::vector<Aggregate>& aggregates) {
  std::vector<std::string> families;
  for (const auto& p : config.policies) {
    const auto members = std::count_if(config.policies.begin(), config.policies.end(),
                                       [&](const PolicySpec& q) { return q.family == p.family; });
    if (members > 1 && std::find(families.begin(), families.end(), p.family) == families.end())
      families.push_back(p.family);
  }
  std::vector<Aggregate> out;
  for (const auto& s : config.settings) {
    for (const auto& family : families) {
      const Aggregate* best = nullptr;
      for (const auto& a : aggregates) {
        if (a.setting_id != s.id || a.n == 0) continue;
        const auto it = std::find_if(config.policies.begin(), config.policies.end(),
                                     [&](const PolicySpec& p) { return p.id == a.policy_id; });
        if (it == config.policies.end() || it->family != family) continue;
        if (!best || a.mean > best->mean) best = &a;
      }
      if (!best) continue;
      Aggregate b = *best;
      b.policy_id = family;
      out.push_back(std::move(b));
    }
  }
  return out;
}

SuiteResult run_suite(const ExperimentConfig& config, std::ostream* progress) {
  config.validate();
  const std::size_t n_settings = config.settings.size();
  const std::size_t n_policies = config.policies.size();
  const std::size_t total = n_settings * n_policies * config.trials;

  SuiteResult result;
  result.trials.resize(total);
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::size_t finished = 0;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      // Job order is (setting, trial, policy) so concurrent workers share
      // instances; output order is (setting, policy, trial).
      const std::size_t s = job / (config.trials * n_policies);
      const std::size_t t = (job / n_policies) % config.trials;
      const std::size_t p = job % n_policies;
      const std::uint64_t seed = trial_seed(config.seed, s, t);

      TrialResult r;
      try {
        const Instance inst = generate_instance(config.domain, config.settings[s], seed);
        r = run_trial(inst.problem, inst.world, config.policies[p], seed, config.record_timing);
      } catch (const std::exception& e) {
        r = TrialResult{};
        r.policy_id = config.policies[p].id;
        r.seed = seed;
        r.error = e.what();
      }
      r.setting_id = config.settings[s].id;
      r.trial = t;
      if (!config.save_traces) r.trace.clear();
      if (progress) {
        std::lock_guard lock(progress_mutex);
        ++finished;
        *progress << "[" << finished << "/" << total << "] " << r.setting_id << " " << r.policy_id << " trial " << t;
        if (r.error)
          *progress << " ERROR: " << *r.error << "\n";
        else
          *progress << " utility " << format_double(r.utility) << "\n";
      }
      result.trials[(s * n_policies + p) * config.trials + t] = std::move(r);
    }
  };

  const std::size_t threads = std::min(config.parallel, total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& t : result.trials)
    if (t.error) ++result.failures;
  result.aggregates = aggregate(config, result.trials);
  result.family_best = best_of_families(config, result.aggregates);
  return result;
}

// ---------------------------------------------------------------------------
// Output

std::string format_csv(const std::vector<TrialResult>& trials) {
  std::string out = "setting_id,policy,seed,utility,energy_spent,reached_goal,steps,mean_plan_seconds\n";
  for (const auto& t : trials) {
    if (t.error) continue;
    out += t.setting_id + ',' + t.policy_id + ',' + std::to_string(t.seed) + ',' + format_double(t.utility) + ',' +
           format_double(t.energy_spent) + ',' + (t.reached_goal ? "true" : "false") + ',' +
           std::to_string(t.steps) + ',' + format_double(t.mean_plan_seconds) + '\n';
  }
  return out;
}

namespace {

json aggregate_to_json(const Aggregate& a) {
  return {{"setting_id", a.setting_id}, {"policy", a.policy_id}, {"n", a.n},          {"errors", a.errors},
          {"mean", a.mean},             {"sem", a.sem},           {"sem_flag", a.sem_flag}};
}

json observation_to_json(const Observation& obs) {
  json readings = json::array();
  for (const auto& r : obs.readings) readings.push_back({r.node, r.state});
  return readings;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string fixed(double x, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  return os.str();
}

}  // namespace

std::string summary_table(const ExperimentConfig& config, const SuiteResult& result) {
  std::vector<std::string> columns;
  for (const auto& p : config.policies) columns.push_back(p.id);
  for (const auto& a : result.family_best)
    if (std::find(columns.begin(), columns.end(), a.policy_id) == columns.end()) columns.push_back(a.policy_id);

  auto find = [&](const std::string& setting, const std::string& policy) -> const Aggregate* {
    for (const auto* list : {&result.aggregates, &result.family_best})
      for (const auto& a : *list)
        if (a.setting_id == setting && a.policy_id == policy) return &a;
    return nullptr;
  };

  std::size_t first = 7;
  for (const auto& s : config.settings) first = std::max(first, s.id.size());
  std::vector<std::size_t> widths;
  for (const auto& c : columns) widths.push_back(std::max<std::size_t>(c.size(), 20));

  std::string out = pad("setting", first + 2);
  for (std::size_t i = 0; i < columns.size(); ++i) out += pad(columns[i], widths[i] + 2);
  out += '\n';
  for (const auto& s : config.settings) {
    out += pad(s.id, first + 2);
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const Aggregate* a = find(s.id, columns[i]);
      std::string cell = "-";
      if (a && a->n > 0) {
        cell = fixed(a->mean, 1) + " +/- " + fixed(a->sem, 1);
        if (a->sem_flag) cell += " *";
        if (a->errors > 0) cell += " (" + std::to_string(a->errors) + " err)";
      }
      out += pad(cell, widths[i] + 2);
    }
    out += '\n';
  }
  out += "mean +/- standard error over completed trials; * marks SEM above 10% of the mean\n";
  return out;
}

void write_outputs(const ExperimentConfig& config, const SuiteResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << text;
  };
  write("trials.csv", format_csv(result.trials));

  json aggregates = json::array();
  for (const auto& a : result.aggregates) aggregates.push_back(aggregate_to_json(a));
  json best = json::array();
  for (const auto& a : result.family_best) best.push_back(aggregate_to_json(a));
  json errors = json::array();
  for (const auto& t : result.trials)
    if (t.error)
      errors.push_back({{"setting_id", t.setting_id}, {"policy", t.policy_id}, {"trial", t.trial}, {"seed", t.seed},
                        {"error", *t.error}});
  json doc{{"config", to_json(config)},
           {"aggregates", std::move(aggregates)},
           {"family_best", std::move(best)},
           {"errors", std::move(errors)},
           {"metadata",
            {{"isrs_graph", "grid: one node per cell with unit moves between 4-adjacent cells; closure: complete "
                            "graph over origin, rocks and beacons with Manhattan edge weights"},
             {"naive_label", "modified NAIVE (stand-in subplanner: greedy cost-benefit insertion)"},
             {"sar_edge_scale", 1.0},
             {"seed_derivation", "splitmix64 counter split over (master, setting index, trial index)"}}}};
  write("results.json", doc.dump(2) + "\n");
  write("summary.txt", summary_table(config, result));

  if (config.save_traces) {
    std::string lines;
    for (const auto& t : result.trials) {
      if (t.error) continue;
      json steps = json::array();
      for (const auto& s : t.trace)
        steps.push_back({{"action", to_string(s.action)},
                         {"observation", observation_to_json(s.observation)},
                         {"reward", s.reward},
                         {"cost", s.cost}});
      json line{{"setting_id", t.setting_id}, {"policy", t.policy_id},   {"trial", t.trial},
                {"seed", t.seed},             {"budget", t.budget},      {"energy_spent", t.energy_spent},
                {"utility", t.utility},       {"steps", std::move(steps)}};
      lines += line.dump() + "\n";
    }
    write("traces.jsonl", lines);
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_double(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw ConfigError("not a number: '" + s + "'");
  return x;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

VerifyReport verify_outputs(const std::filesystem::path& dir) {
  VerifyReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.messages.push_back(std::move(msg));
  };

  std::ifstream results_file(dir / "results.json");
  std::ifstream csv_file(dir / "trials.csv");
  if (!results_file || !csv_file) {
    fail("missing results.json or trials.csv in " + dir.string());
    return report;
  }
  json doc;
  try {
    doc = json::parse(results_file);
  } catch (const json::exception& e) {
    fail(std::string("results.json does not parse: ") + e.what());
    return report;
  }

  std::map<std::pair<std::string, std::string>, std::vector<double>> utilities;
  std::string line;
  std::getline(csv_file, line);
  if (line != "setting_id,policy,seed,utility,energy_spent,reached_goal,steps,mean_plan_seconds") {
    fail("trials.csv has an unexpected header");
    return report;
  }
  std::size_t row = 1;
  while (std::getline(csv_file, line)) {
    ++row;
    const auto cols = split(line, ',');
    if (cols.size() != 8) {
      fail("trials.csv row " + std::to_string(row) + " has " + std::to_string(cols.size()) + " columns");
      continue;
    }
    try {
      utilities[{cols[0], cols[1]}].push_back(parse_double(cols[3]));
      if (cols[5] != "true") fail("trials.csv row " + std::to_string(row) + " did not reach the goal");
    } catch (const ConfigError& e) {
      fail("trials.csv row " + std::to_string(row) + ": " + e.what());
    }
  }

  for (const auto& a : doc.at("aggregates")) {
    const auto key = std::make_pair(a.at("setting_id").get<std::string>(), a.at("policy").get<std::string>());
    const auto& xs = utilities[key];
    const auto n = a.at("n").get<std::size_t>();
    const std::string name = key.first + "/" + key.second;
    if (xs.size() != n) {
      fail(name + ": results.json says n = " + std::to_string(n) + " but trials.csv has " + std::to_string(xs.size()));
      continue;
    }
    double mean = 0.0, sem = 0.0;
    for (double x : xs) mean += x;
    if (n > 0) mean /= static_cast<double>(n);
    if (n > 1) {
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      sem = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    }
    if (!close(mean, a.at("mean").get<double>())) fail(name + ": mean does not match trials.csv");
    if (!close(sem, a.at("sem").get<double>())) fail(name + ": sem does not match trials.csv");
  }

  if (std::ifstream traces(dir / "traces.jsonl"); traces) {
    while (std::getline(traces, line)) {
      const json t = json::parse(line);
      if (t.at("energy_spent").get<double>() > t.at("budget").get<double>() + kEnergyTolerance)
        fail(t.at("setting_id").get<std::string>() + "/" + t.at("policy").get<std::string>() + " trial " +
             std::to_string(t.at("trial").get<std::size_t>()) + " overspent its budget");
    }
  }
  if (!doc.at("errors").empty()) fail(std::to_string(doc.at("errors").size()) + " trial(s) failed");
  if (report.ok) report.messages.push_back("ok");
  return report;
}

}  // namespace aippms
