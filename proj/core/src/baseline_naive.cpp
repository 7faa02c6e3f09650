#include "aippms/baseline_naive.hpp"

#include <algorithm>
#include <limits>

namespace aippms {

void NaiveConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("naive: lambda must lie in [0, 1]");
  if (ig_samples == 0) throw ConfigError("naive: ig_samples must be positive");
}

namespace {

Energy route_cost(const std::vector<NodeId>& route, const CostMatrix& costs) {
  Energy total = 0.0;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) total += costs(route[i], route[i + 1]);
  return total;
}

}  // namespace

PlannedPath plan_orienteering_path(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                                   std::size_t max_insertions) {
  const CostMatrix& costs = problem.costs();
  const NodeId goal = problem.goal();
  if (!is_feasible_state(state, costs, goal))
    throw InvalidAction("plan_orienteering_path: state cannot reach the goal within its budget");

  const std::size_t n = problem.graph().node_count();
  const Energy budget = state.remaining_budget + kEnergyTolerance;
  std::vector<NodeId> route{state.current, goal};
  Energy cost = costs(state.current, goal);

  NodeSet covered = state.visited;  // visited plus nodes already on the route
  covered.insert(goal);

  std::vector<NodeId> candidates;
  for (std::size_t inserted = 0; inserted < max_insertions;) {
    candidates.clear();
    for (NodeId v = 0; v < n; ++v)
      if (!covered.contains(v)) candidates.push_back(v);
    if (candidates.empty()) break;
    const auto gains = expected_marginal_utilities(belief, candidates, covered, problem.utility());

    std::optional<NodeId> best_node;
    std::size_t best_slot = 0;
    double best_ratio = -1.0;
    Energy best_added = 0.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!(gains[c] > 0.0)) continue;
      const NodeId v = candidates[c];
      std::size_t slot = 0;
      Energy added = std::numeric_limits<Energy>::infinity();
      for (std::size_t i = 0; i + 1 < route.size(); ++i) {
        const Energy extra = costs(route[i], v) + costs(v, route[i + 1]) - costs(route[i], route[i + 1]);
        if (extra < added) {
          added = extra;
          slot = i + 1;
        }
      }
      if (cost + added > budget) continue;
      const double ratio = gains[c] / std::max(added, 1e-12);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_node = v;
        best_slot = slot;
        best_added = added;
      }
    }

    if (!best_node) break;
    route.insert(route.begin() + static_cast<std::ptrdiff_t>(best_slot), *best_node);
    cost += best_added;
    covered.insert(*best_node);
    ++inserted;
  }

  PlannedPath path;
  path.nodes.push_back(route.front());
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    const auto leg = costs.path(route[i], route[i + 1]);
    path.nodes.insert(path.nodes.end(), leg.begin() + 1, leg.end());
  }
  path.cost = route_cost(route, costs);
  return path;
}

double path_expected_utility(const PlannedPath& path, const WorldBelief& belief, const NodeSet& visited,
                             const UtilityFunction& utility) {
  std::vector<NodeId> nodes;
  for (NodeId v : path.nodes)
    if (!visited.contains(v) && std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
  double total = 0.0;
  for (double g : expected_marginal_utilities(belief, nodes, visited, utility)) total += g;
  return total;
}

SensorChoice best_sensor_ig(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                            std::size_t ig_samples, Rng& rng) {
  SensorChoice best{std::nullopt, -std::numeric_limits<double>::infinity()};
  for (const Action& a : problem.feasible_actions(state)) {
    if (!a.is_sense()) continue;
    const double ig = info_gain_estimate(belief, a, state, problem.sensor_model(), ig_samples, rng);
    if (!best.action || ig > best.value) best = {a, ig};
  }
  return best;
}

Action naive_action(const Problem& problem, const AgentState& state, const WorldBelief& belief,
                    const NaiveConfig& config, Rng& rng) {
  const auto feasible = problem.feasible_actions(state);
  if (feasible.empty()) throw InvalidAction("naive_action: state is terminal");

  const PlannedPath path = plan_orienteering_path(problem, state, belief, config.max_insertions);
  const double path_utility = path_expected_utility(path, belief, state.visited, problem.utility());
  const SensorChoice sensor = best_sensor_ig(problem, state, belief, config.ig_samples, rng);

  // lambda = 1 puts zero weight on sensing, so the path always wins.
  const bool move = !sensor.action || config.lambda >= 1.0 ||
                    config.lambda * path_utility > (1.0 - config.lambda) * sensor.value;
  if (!move) return *sensor.action;

  if (path.nodes.size() >= 2) {
    const Action a = Action::move(path.nodes[1]);
    if (!problem.is_feasible_action(state, a))
      throw InvalidAction("naive_action: planned move " + to_string(a) + " is infeasible");
    return a;
  }
  // Already at the goal with nothing worth inserting: take the cheapest
  // feasible move, or the sensor if no move fits.
  const Action* cheapest = nullptr;
  Energy cheapest_cost = std::numeric_limits<Energy>::infinity();
  for (const Action& a : feasible) {
    if (!a.is_move()) continue;
    const Energy c = action_cost(state, a, problem.graph(), problem.sensors());
    if (c < cheapest_cost) {
      cheapest_cost = c;
      cheapest = &a;
    }
  }
  if (cheapest) return *cheapest;
  return sensor.action ? *sensor.action : feasible.front();
}

}  // namespace aippms
