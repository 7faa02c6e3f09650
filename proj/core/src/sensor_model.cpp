#include "aippms/sensor_model.hpp"

#include <stdexcept>

namespace aippms {

SensorModel::SensorModel(std::size_t node_count, std::size_t state_count,
                         std::vector<std::vector<std::vector<FootprintEntry>>> footprints,
                         std::vector<bool> sensing_nodes, std::vector<std::optional<StateId>> visit_state)
    : nodes_(node_count),
      states_(state_count),
      footprints_(std::move(footprints)),
      sensing_nodes_(std::move(sensing_nodes)),
      visit_state_(std::move(visit_state)) {
  if (!sensing_nodes_.empty() && sensing_nodes_.size() != nodes_)
    throw std::invalid_argument("sensing node mask has the wrong size");
  if (!visit_state_.empty() && visit_state_.size() != nodes_)
    throw std::invalid_argument("visit state table has the wrong size");
  accuracy_.assign(footprints_.size() * nodes_ * nodes_, 0.0);
  for (std::size_t s = 0; s < footprints_.size(); ++s) {
    if (footprints_[s].size() != nodes_) throw std::invalid_argument("footprint table has the wrong size");
    for (std::size_t a = 0; a < nodes_; ++a) {
      for (const auto& e : footprints_[s][a]) {
        if (e.node >= nodes_) throw std::invalid_argument("footprint references a missing node");
        if (!(e.accuracy >= 0.0 && e.accuracy <= 1.0))
          throw std::invalid_argument("footprint accuracy outside [0, 1]");
        accuracy_[(s * nodes_ + a) * nodes_ + e.node] = e.accuracy;
      }
    }
  }
}

StateId SensorModel::sample_reading(double accuracy, StateId truth, Rng& rng) const {
  if (states_ <= 1 || rng.bernoulli(accuracy)) return truth;
  // Uniform over the other states.
  auto wrong = static_cast<StateId>(rng.index(states_ - 1));
  return wrong >= truth ? static_cast<StateId>(wrong + 1) : wrong;
}

Observation SensorModel::observe(const WorldState& world, NodeId agent, SensorId sensor, const NodeSet& visited,
                                 Rng& rng) const {
  if (sensor >= sensor_count()) throw InvalidAction("unknown sensor id " + std::to_string(sensor));
  if (!can_sense_at(agent)) throw InvalidAction("sensing is not possible at node " + std::to_string(agent));
  Observation obs{Action::sense(sensor), {}};
  for (const auto& e : footprint(sensor, agent)) {
    if (visited.contains(e.node)) continue;
    obs.readings.push_back({e.node, sample_reading(e.accuracy, world.at(e.node), rng)});
  }
  return obs;
}

void SensorModel::update(WorldBelief& belief, NodeId agent, const Observation& obs) const {
  const SensorId sensor = obs.action.sensor();
  bayes_update_in_place(belief, obs, [&](NodeId node, StateId observed, StateId truth) {
    return channel(accuracy(sensor, agent, node), observed, truth);
  });
}

std::vector<std::vector<std::vector<FootprintEntry>>> distance_footprints(const LocationGraph& graph,
                                                                         std::span<const SensorSpec> sensors,
                                                                         std::span<const NodeId> targets) {
  const std::size_t n = graph.node_count();
  std::vector<NodeId> all;
  if (targets.empty()) {
    for (NodeId v = 0; v < n; ++v) all.push_back(v);
    targets = all;
  }
  std::vector<std::vector<std::vector<FootprintEntry>>> table(sensors.size(),
                                                              std::vector<std::vector<FootprintEntry>>(n));
  for (std::size_t s = 0; s < sensors.size(); ++s) {
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId t : targets) {
        const double d = graph.distance(a, t);
        if (d > sensors[s].range) continue;
        table[s][a].push_back({t, sensors[s].fidelity(d)});
      }
    }
  }
  return table;
}

}  // namespace aippms
