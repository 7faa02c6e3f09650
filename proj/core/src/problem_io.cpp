#include "aippms/problem_io.hpp"

#include <cmath>
#include <limits>

namespace aippms {

using nlohmann::json;

namespace {

Domain domain_from_string(const std::string& s) {
  if (s == "sar") return Domain::Sar;
  if (s == "isrs") return Domain::Isrs;
  if (s == "custom") return Domain::Custom;
  throw ConfigError("problem: unknown domain '" + s + "'");
}

json utility_to_json(const UtilityFunction& u) {
  if (const auto* cov = dynamic_cast<const sar::CoverageUtility*>(&u)) {
    return {{"type", "coverage"},
            {"radii", std::vector<double>(cov->radii().begin(), cov->radii().end())},
            {"grid_resolution", cov->grid_resolution()}};
  }
  if (const auto* mod = dynamic_cast<const ModularUtility*>(&u)) {
    json rows = json::array();
    for (NodeId v = 0; v < mod->node_count(); ++v) {
      json row = json::array();
      for (StateId x = 0; x < mod->state_count(); ++x) row.push_back(mod->reward(v, x));
      rows.push_back(std::move(row));
    }
    return {{"type", "modular"}, {"rewards", std::move(rows)}};
  }
  throw ConfigError("problem: utility type cannot be serialized");
}

std::shared_ptr<const UtilityFunction> utility_from_json(const json& j, const LocationGraph& graph,
                                                         std::size_t states) {
  const auto type = j.at("type").get<std::string>();
  if (type == "coverage") {
    const auto radii = j.at("radii").get<std::vector<double>>();
    if (radii.size() != states) throw ConfigError("problem: coverage radii do not match the state count");
    return std::make_shared<sar::CoverageUtility>(graph.positions(), radii, j.at("grid_resolution").get<std::size_t>());
  }
  if (type == "modular") {
    const auto& rows = j.at("rewards");
    if (rows.size() != graph.node_count()) throw ConfigError("problem: reward table has the wrong node count");
    std::vector<double> rewards;
    for (const auto& row : rows) {
      if (row.size() != states) throw ConfigError("problem: reward row has the wrong state count");
      for (const auto& x : row) rewards.push_back(x.get<double>());
    }
    return std::make_shared<ModularUtility>(graph.node_count(), states, std::move(rewards));
  }
  throw ConfigError("problem: unknown utility type '" + type + "'");
}

}  // namespace

json sensor_to_json(const SensorSpec& s) {
  return {{"name", s.name},
          {"cost", s.cost},
          {"max_fidelity", s.max_fidelity},
          {"decay_rate", s.decay_rate},
          {"range", std::isinf(s.range) ? json(nullptr) : json(s.range)}};
}

SensorSpec sensor_from_json(const json& j) {
  SensorSpec s;
  s.name = j.at("name").get<std::string>();
  s.cost = j.at("cost").get<double>();
  s.max_fidelity = j.at("max_fidelity").get<double>();
  s.decay_rate = j.at("decay_rate").get<double>();
  const auto range = j.find("range");
  s.range = (range == j.end() || range->is_null()) ? std::numeric_limits<double>::infinity() : range->get<double>();
  s.validate();
  return s;
}

json problem_to_json(const Problem& problem, const WorldState* world) {
  const auto& g = problem.graph();
  const auto& model = problem.sensor_model();
  const std::size_t n = g.node_count();

  json doc;
  doc["domain"] = to_string(problem.domain());
  json nodes = json::array();
  for (NodeId v = 0; v < n; ++v) nodes.push_back({v, g.position(v).x, g.position(v).y});
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.weight});
  doc["edges"] = std::move(edges);
  doc["start"] = g.start();
  doc["goal"] = g.goal();
  doc["budget"] = problem.budget();

  json sensors = json::array();
  for (const auto& s : problem.sensors()) sensors.push_back(sensor_to_json(s));
  doc["sensors"] = std::move(sensors);

  doc["states"] = model.state_count();
  json prior = json::array();
  for (NodeId v = 0; v < n; ++v) {
    const auto d = problem.prior().distribution(v);
    prior.push_back(std::vector<double>(d.begin(), d.end()));
  }
  doc["prior"] = std::move(prior);

  json footprints = json::array();
  for (SensorId s = 0; s < model.sensor_count(); ++s) {
    json per_agent = json::array();
    for (NodeId a = 0; a < n; ++a) {
      json entries = json::array();
      for (const auto& e : model.footprint(s, a)) entries.push_back({e.node, e.accuracy});
      per_agent.push_back(std::move(entries));
    }
    footprints.push_back(std::move(per_agent));
  }
  json observation{{"footprints", std::move(footprints)}};
  observation["sensing_nodes"] = model.sensing_nodes().empty() ? json(nullptr) : json(model.sensing_nodes());
  if (model.visit_states().empty()) {
    observation["visit_state"] = nullptr;
  } else {
    json vs = json::array();
    for (const auto& x : model.visit_states()) vs.push_back(x ? json(*x) : json(nullptr));
    observation["visit_state"] = std::move(vs);
  }
  doc["observation"] = std::move(observation);
  doc["utility"] = utility_to_json(problem.utility());
  if (world) doc["world"] = *world;
  return doc;
}

LoadedProblem problem_from_json(const json& doc) {
  try {
    std::vector<Point> positions;
    for (const auto& row : doc.at("nodes")) {
      if (row.at(0).get<NodeId>() != positions.size()) throw ConfigError("problem: node ids must be 0..n-1 in order");
      positions.push_back({row.at(1).get<double>(), row.at(2).get<double>()});
    }
    std::vector<Edge> edges;
    for (const auto& row : doc.at("edges"))
      edges.push_back({row.at(0).get<NodeId>(), row.at(1).get<NodeId>(), row.at(2).get<double>()});
    const std::size_t n = positions.size();
    LocationGraph graph(std::move(positions), std::move(edges), doc.at("start").get<NodeId>(),
                        doc.at("goal").get<NodeId>());

    std::vector<SensorSpec> sensors;
    for (const auto& s : doc.at("sensors")) sensors.push_back(sensor_from_json(s));

    const auto states = doc.at("states").get<std::size_t>();
    std::vector<double> prior;
    for (const auto& row : doc.at("prior")) {
      if (row.size() != states) throw ConfigError("problem: prior row has the wrong state count");
      for (const auto& x : row) prior.push_back(x.get<double>());
    }

    const auto& obs = doc.at("observation");
    std::vector<std::vector<std::vector<FootprintEntry>>> footprints;
    for (const auto& per_agent : obs.at("footprints")) {
      auto& table = footprints.emplace_back();
      for (const auto& entries : per_agent) {
        auto& list = table.emplace_back();
        for (const auto& e : entries) list.push_back({e.at(0).get<NodeId>(), e.at(1).get<double>()});
      }
    }
    std::vector<bool> sensing;
    if (!obs.at("sensing_nodes").is_null()) sensing = obs.at("sensing_nodes").get<std::vector<bool>>();
    std::vector<std::optional<StateId>> visit_state;
    if (!obs.at("visit_state").is_null())
      for (const auto& x : obs.at("visit_state"))
        visit_state.push_back(x.is_null() ? std::nullopt : std::optional<StateId>(x.get<StateId>()));

    auto utility = utility_from_json(doc.at("utility"), graph, states);
    SensorModel model(n, states, std::move(footprints), std::move(sensing), std::move(visit_state));
    Problem problem(std::move(graph), std::move(sensors), std::move(utility), std::move(model),
                    WorldBelief(n, states, std::move(prior)), doc.at("budget").get<double>(),
                    domain_from_string(doc.at("domain").get<std::string>()));

    std::optional<WorldState> world;
    if (const auto it = doc.find("world"); it != doc.end() && !it->is_null()) {
      world = it->get<WorldState>();
      if (world->size() != n) throw ConfigError("problem: world has the wrong node count");
      for (StateId x : *world)
        if (x >= states) throw ConfigError("problem: world state outside the alphabet");
    }
    return {std::move(problem), std::move(world)};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem: malformed JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

}  // namespace aippms
