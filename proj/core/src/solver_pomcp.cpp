#include "aippms/solver_pomcp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aippms {

std::string to_string(RolloutPolicy policy) { return policy == RolloutPolicy::Gcb ? "gcb" : "random"; }

void PlannerConfig::validate() const {
  if (n_simulations == 0) throw ConfigError("planner: n_simulations must be positive");
  if (!(ucb_c >= 0.0)) throw ConfigError("planner: ucb_c must be non-negative");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("planner: gamma must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("planner: epsilon must lie in (0, 1)");
  if (ig_samples == 0) throw ConfigError("planner: ig_samples must be positive");
  if (!(softmax_temperature > 0.0)) throw ConfigError("planner: softmax_temperature must be positive");
}

// ---------------------------------------------------------------------------
// SearchTree

namespace {

std::string observation_key(const Observation& obs) {
  std::string key;
  key.reserve(obs.readings.size() * 5);
  for (const auto& r : obs.readings) {
    for (int shift = 0; shift < 32; shift += 8) key.push_back(static_cast<char>((r.node >> shift) & 0xFF));
    key.push_back(static_cast<char>(r.state));
  }
  return key;
}

}  // namespace

std::size_t SearchTree::add_node(std::span<const Action> feasible) {
  HistoryNode n;
  n.actions.reserve(feasible.size());
  for (const auto& a : feasible) n.actions.push_back(ActionStats{a, 0, 0.0, 0.0, {}});
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

std::optional<std::size_t> SearchTree::find_child(std::size_t node, std::size_t action_index,
                                                  const Observation& obs) const {
  const std::string key = observation_key(obs);
  const std::uint64_t hash = fnv1a64(key);
  for (const auto& b : nodes_.at(node).actions.at(action_index).branches)
    if (b.hash == hash && b.key == key) return b.node;
  return std::nullopt;
}

void SearchTree::link_child(std::size_t node, std::size_t action_index, const Observation& obs, std::size_t child) {
  std::string key = observation_key(obs);
  const std::uint64_t hash = fnv1a64(key);
  nodes_.at(node).actions.at(action_index).branches.push_back(Branch{hash, std::move(key), child});
}

// ---------------------------------------------------------------------------
// Action selection

std::size_t ucb_select(const SearchTree::HistoryNode& node, double c) {
  if (node.actions.empty()) throw InvalidAction("ucb_select: no feasible actions");
  const double log_n = std::log(static_cast<double>(std::max<std::uint64_t>(node.visits, 1)));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < node.actions.size(); ++i) {
    const auto& a = node.actions[i];
    if (a.visits == 0) return i;  // actions are stored in id order
    const double score = a.value + c * std::sqrt(log_n / static_cast<double>(a.visits));
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

std::vector<double> softmax_probabilities(std::span<const double> utilities, const PlannerConfig& config) {
  const std::size_t n = utilities.size();
  std::vector<double> probs(n, 0.0);
  if (n == 0) return probs;

  std::vector<bool> support(n, true);
  if (config.positive_support && std::any_of(utilities.begin(), utilities.end(), [](double u) { return u > 0.0; })) {
    for (std::size_t i = 0; i < n; ++i) support[i] = utilities[i] > 0.0;
  }

  double scale = 1.0;
  if (config.normalize_utilities) {
    scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (support[i]) scale = std::max(scale, std::abs(utilities[i]));
    if (scale == 0.0) scale = 1.0;
  }
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (support[i]) top = std::max(top, utilities[i] / scale / config.softmax_temperature);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!support[i]) continue;
    probs[i] = std::exp(utilities[i] / scale / config.softmax_temperature - top);
    total += probs[i];
  }
  for (auto& p : probs) p /= total;
  return probs;
}

ActionDistribution gcb_action_distribution(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                                           const PlannerConfig& config, Rng& rng) {
  ActionDistribution out;
  out.actions = problem.feasible_actions(state);
  if (out.actions.empty()) throw InvalidAction("gcb_rollout_action: no feasible actions");

  std::vector<NodeId> targets;
  for (const auto& a : out.actions)
    if (a.is_move()) targets.push_back(a.node());
  const auto gains = expected_marginal_utilities(belief, targets, state.visited, problem.utility());

  out.utilities.resize(out.actions.size());
  std::size_t move_index = 0;
  for (std::size_t i = 0; i < out.actions.size(); ++i) {
    const Action& a = out.actions[i];
    const Energy cost = action_cost(state, a, problem.graph(), problem.sensors());
    const double benefit = a.is_move() ? gains[move_index++]
                                       : info_gain_estimate(belief, a, state, problem.sensor_model(),
                                                            config.ig_samples, rng);
    out.utilities[i] = benefit / cost;
  }
  out.probabilities = softmax_probabilities(out.utilities, config);
  return out;
}

Action gcb_rollout_action(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                          const PlannerConfig& config, Rng& rng) {
  const auto dist = gcb_action_distribution(problem, state, belief, config, rng);
  if (dist.actions.size() == 1) return dist.actions.front();
  return dist.actions[rng.categorical(dist.probabilities)];
}

Action random_rollout_action(const Problem& problem, const AgentState& state, Rng& rng) {
  const auto actions = problem.feasible_actions(state);
  if (actions.empty()) throw InvalidAction("random_rollout_action: no feasible actions");
  return actions[rng.index(actions.size())];
}

// ---------------------------------------------------------------------------
// PomcpPlanner

PomcpPlanner::PomcpPlanner(const Problem& problem, PlannerConfig config, Rng& rng)
    : problem_(problem), config_(config), rng_(rng) {
  config_.validate();
  double discount = 1.0;
  while (discount >= config_.epsilon) {
    discount *= config_.gamma;
    ++horizon_;
  }
}

Action PomcpPlanner::rollout_action(const AgentState& state, const WorldBelief& belief) {
  if (config_.rollout == RolloutPolicy::Gcb) return gcb_rollout_action(problem_, state, belief, config_, rng_);
  return random_rollout_action(problem_, state, rng_);
}

double PomcpPlanner::rollout(AgentState state, const WorldState& world, WorldBelief& belief, int depth) {
  double total = 0.0;
  double discount = 1.0;
  for (; depth < horizon_; ++depth) {
    if (is_terminal(problem_, state)) break;
    const Action a = rollout_action(state, belief);
    if (hook_) hook_(state, a);
    StepOutcome out = step(problem_, state, world, a, rng_);
    total += discount * out.reward;
    // A random rollout never reads the belief, so it is not advanced.
    if (tracks_belief()) apply_observation(problem_, belief, state, out.observation);
    state = std::move(out.next_state);
    discount *= config_.gamma;
  }
  return total;
}

double PomcpPlanner::simulate(std::size_t node, const AgentState& state, const WorldState& world,
                              WorldBelief& belief, int depth) {
  if (depth >= horizon_) return 0.0;
  if (tree_.node(node).actions.empty()) return 0.0;  // terminal history

  const std::size_t ai = ucb_select(tree_.node(node), config_.ucb_c);
  const Action a = tree_.node(node).actions[ai].action;
  if (hook_) hook_(state, a);
  StepOutcome out = step(problem_, state, world, a, rng_);
  if (tracks_belief()) apply_observation(problem_, belief, state, out.observation);

  double future = 0.0;
  if (const auto child = tree_.find_child(node, ai, out.observation)) {
    future = simulate(*child, out.next_state, world, belief, depth + 1);
  } else if (depth + 1 < horizon_) {
    const std::size_t created = tree_.add_node(problem_.feasible_actions(out.next_state));
    tree_.link_child(node, ai, out.observation, created);
    future = rollout(out.next_state, world, belief, depth + 1);
  }
  const double ret = out.reward + config_.gamma * future;

  // add_node may have reallocated; re-fetch.
  auto& h = tree_.node(node);
  auto& stats = h.actions[ai];
  ++h.visits;
  ++stats.visits;
  stats.value += (ret - stats.value) / static_cast<double>(stats.visits);
  stats.return_sum += ret;
  return ret;
}

Action PomcpPlanner::plan(const AgentState& state, const WorldBelief& belief) {
  const auto feasible = problem_.feasible_actions(state);
  if (feasible.empty()) throw InvalidAction("plan: state is terminal");
  tree_.clear();
  tree_.add_node(feasible);
  if (feasible.size() == 1) return feasible.front();

  WorldBelief scratch = belief;
  for (std::size_t i = 0; i < config_.n_simulations; ++i) {
    const WorldState world = sample_world(belief, rng_);
    if (tracks_belief()) scratch = belief;
    simulate(SearchTree::kRoot, state, world, scratch, 0);
  }

  const auto& root = tree_.node(SearchTree::kRoot);
  const SearchTree::ActionStats* best = nullptr;
  for (const auto& a : root.actions) {
    if (a.visits == 0) continue;
    if (!best || a.value > best->value) best = &a;
  }
  return best ? best->action : root.actions.front().action;
}

Action plan(const Problem& problem, const AgentState& state, const WorldBelief& belief, const PlannerConfig& config,
            Rng& rng) {
  PomcpPlanner planner(problem, config, rng);
  return planner.plan(state, belief);
}

}  // namespace aippms
