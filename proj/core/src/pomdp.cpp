#include "aippms/pomdp.hpp"

#include <stdexcept>

namespace aippms {

std::string to_string(Domain domain) {
  switch (domain) {
    case Domain::Sar: return "sar";
    case Domain::Isrs: return "isrs";
    case Domain::Custom: return "custom";
  }
  return "unknown";
}

Problem::Problem(LocationGraph graph, std::vector<SensorSpec> sensors, std::shared_ptr<const UtilityFunction> utility,
                 SensorModel sensor_model, WorldBelief prior, Energy budget, Domain domain)
    : graph_(std::move(graph)),
      sensors_(std::move(sensors)),
      utility_(std::move(utility)),
      sensor_model_(std::move(sensor_model)),
      prior_(std::move(prior)),
      budget_(budget),
      domain_(domain) {
  for (const auto& s : sensors_) s.validate();
  if (!utility_) throw ConfigError("problem has no utility function");
  if (sensor_model_.sensor_count() != sensors_.size())
    throw ConfigError("sensor model and sensor list disagree on the number of sensors");
  if (sensor_model_.node_count() != graph_.node_count() || prior_.node_count() != graph_.node_count())
    throw ConfigError("sensor model or prior does not cover every graph node");
  if (sensor_model_.state_count() != prior_.state_count())
    throw ConfigError("sensor model and prior use different state alphabets");
  if (budget_ + kEnergyTolerance < costs()(graph_.start(), graph_.goal()))
    throw ConfigError("budget is below the shortest start-to-goal cost; no feasible episode exists");
}

std::vector<Action> Problem::feasible_actions(const AgentState& state) const {
  return aippms::feasible_actions(state, graph_, sensors_, costs(), sensor_model_.can_sense_at(state.current));
}

bool Problem::is_feasible_action(const AgentState& state, const Action& action) const {
  if (action.is_sense()) {
    if (action.sensor() >= sensors_.size() || !sensor_model_.can_sense_at(state.current)) return false;
    return sensors_[action.sensor()].cost + costs()(state.current, goal()) <=
           state.remaining_budget + kEnergyTolerance;
  }
  const auto w = graph_.edge_weight(state.current, action.node());
  if (!w) return false;
  return *w + costs()(action.node(), goal()) <= state.remaining_budget + kEnergyTolerance;
}

StepOutcome step(const Problem& problem, const AgentState& state, const WorldState& world, const Action& action,
                 Rng& rng) {
  const Energy cost = action_cost(state, action, problem.graph(), problem.sensors());
  if (!problem.is_feasible_action(state, action))
    throw InvalidAction("action " + to_string(action) + " would leave too little energy to reach the goal");

  StepOutcome out;
  out.cost = cost;
  out.next_state = state;
  out.next_state.remaining_budget -= cost;
  if (action.is_move()) {
    const NodeId v = action.node();
    out.reward = problem.utility().marginal_gain(v, state.visited, world);
    out.next_state.current = v;
    out.next_state.visited.insert(v);
    out.observation = Observation{action, {{v, world.at(v)}}};
  } else {
    out.observation = problem.sensor_model().observe(world, state.current, action.sensor(), state.visited, rng);
  }
  return out;
}

bool is_terminal(const Problem& problem, const AgentState& state) {
  return problem.feasible_actions(state).empty();
}

void apply_observation(const Problem& problem, WorldBelief& belief, const AgentState& before,
                       const Observation& obs) {
  if (obs.action.is_move()) {
    for (const auto& r : obs.readings)
      belief.set_point_mass(r.node, problem.sensor_model().state_after_visit(r.node, r.state));
  } else {
    problem.sensor_model().update(belief, before.current, obs);
  }
}

EpisodeReturn episode_return(const Problem& problem, std::span<const StepOutcome> trajectory) {
  EpisodeReturn out;
  NodeId last = problem.graph().start();
  for (const auto& s : trajectory) {
    out.total_reward += s.reward;
    out.total_cost += s.cost;
    last = s.next_state.current;
  }
  out.reached_goal = last == problem.goal();
  return out;
}

}  // namespace aippms
