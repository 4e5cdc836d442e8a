#include "topogas/live/protocol.hpp"

#include "topogas/errors.hpp"
#include "topogas/live/session.hpp"

#include <cmath>
#include <limits>

namespace topogas::live::protocol {

namespace {

double finite_number(const Json &frame, const char *key) {
  const auto it = frame.find(key);
  if (it == frame.end() || !it->is_number()) throw ProtocolError(std::string("'") + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ProtocolError(std::string("'") + key + "' must be finite");
  return v;
}

std::string text_field(const Json &frame, const char *key) {
  const auto &v = frame.at(key);
  if (!v.is_string()) throw ProtocolError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

} // namespace

ClientFrame decode_client_frame(std::string_view text) {
  const Json frame = Json::parse(text.begin(), text.end(), nullptr, false);
  if (frame.is_discarded()) throw ProtocolError("frame is not valid JSON");
  if (!frame.is_object()) throw ProtocolError("frame must be a JSON object");
  if (!frame.contains("type")) throw ProtocolError("frame has no 'type'");
  const std::string type = text_field(frame, "type");

  if (type == "open") {
    OpenFrame open;
    if (frame.contains("map")) open.map = text_field(frame, "map");
    if (frame.contains("session")) open.session = text_field(frame, "session");
    if (frame.contains("params")) {
      if (!frame["params"].is_object()) throw ProtocolError("'params' must be an object");
      open.params = frame["params"];
    }
    return open;
  }
  if (type == "input") {
    InputFrame input;
    if (frame.contains("demonstrator")) {
      const auto &d = frame["demonstrator"];
      if (!d.is_number_integer() || d.get<std::int64_t>() < 0 ||
          d.get<std::int64_t>() > std::numeric_limits<DemonstratorId>::max())
        throw ProtocolError("'demonstrator' must be a non-negative integer");
      input.demonstrator = d.get<DemonstratorId>();
    }
    input.x = finite_number(frame, "x");
    input.y = finite_number(frame, "y");
    return input;
  }
  if (type == "params") {
    ParamsFrame params;
    params.changes = frame;
    params.changes.erase("type");
    return params;
  }
  throw ProtocolError("unknown frame type '" + type + "'");
}

Json params_to_json(const Params &p) {
  return Json{{"winner_attraction", p.winner_attraction},
              {"neighbor_attraction", p.neighbor_attraction},
              {"error_decay", p.error_decay},
              {"max_error", p.max_error},
              {"max_age", p.max_age},
              {"edge_mode", std::string(to_string(p.edge_mode))},
              {"remove_isolated_nodes", p.remove_isolated_nodes},
              {"neighbor_rule", std::string(to_string(p.neighbor_rule))}};
}

Params apply_params(Params p, const Json &fields) {
  if (!fields.is_object()) throw ConfigError("params must be an object");
  const auto number = [](const Json &v, const std::string &key) {
    if (!v.is_number()) throw ConfigError("param '" + key + "' must be a number");
    return v.get<double>();
  };
  for (const auto &[key, v] : fields.items()) {
    if (key == "winner_attraction") {
      p.winner_attraction = number(v, key);
    } else if (key == "neighbor_attraction") {
      p.neighbor_attraction = number(v, key);
    } else if (key == "error_decay") {
      p.error_decay = number(v, key);
    } else if (key == "max_error") {
      p.max_error = number(v, key);
    } else if (key == "max_age") {
      if (!v.is_number_integer()) throw ConfigError("param 'max_age' must be an integer");
      const auto age = v.get<std::int64_t>();
      if (age < 0 || age > std::numeric_limits<int>::max()) throw ConfigError("param 'max_age' out of range");
      p.max_age = static_cast<int>(age);
    } else if (key == "edge_mode") {
      const auto mode = v.is_string() ? parse_edge_mode(v.get<std::string>()) : std::nullopt;
      if (!mode) throw ConfigError("param 'edge_mode' must be proximity, trajectory or both");
      p.edge_mode = *mode;
    } else if (key == "remove_isolated_nodes") {
      if (!v.is_boolean()) throw ConfigError("param 'remove_isolated_nodes' must be a boolean");
      p.remove_isolated_nodes = v.get<bool>();
    } else if (key == "neighbor_rule") {
      const auto rule = v.is_string() ? parse_neighbor_rule(v.get<std::string>()) : std::nullopt;
      if (!rule) throw ConfigError("param 'neighbor_rule' must be toward_input or second_offset");
      p.neighbor_rule = *rule;
    } else {
      throw ConfigError("unknown param '" + key + "'");
    }
  }
  p.validate();
  return p;
}

std::string encode_open(const Session &session) {
  return Json{{"type", "open"},
              {"session", session.id()},
              {"map", session.map().name()},
              {"fixture", format_map(session.map())},
              {"params", params_to_json(session.params())}}
      .dump();
}

std::string encode_graph(const std::string &session_id, const Gas &gas, std::uint64_t dropped) {
  Json nodes = Json::array();
  for (const Node &n : gas.nodes())
    nodes.push_back({{"id", to_index(n.id)}, {"x", n.pos.x}, {"y", n.pos.y}, {"error", n.error}});
  Json edges = Json::array();
  for (const Edge &e : gas.edges())
    edges.push_back({{"a", to_index(e.key.a)},
                     {"b", to_index(e.key.b)},
                     {"kind", e.key.kind == EdgeKind::proximity ? "proximity" : "trajectory"},
                     {"age", e.age}});
  return Json{{"type", "graph"},
              {"session", session_id},
              {"tick", gas.tick()},
              {"node_count", gas.node_count()},
              {"dropped", dropped},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}}
      .dump();
}

std::string encode_params(const Params &params) {
  return Json{{"type", "params"}, {"params", params_to_json(params)}}.dump();
}

std::string encode_error(std::string_view message) {
  return Json{{"type", "error"}, {"message", std::string(message)}}.dump();
}

} // namespace topogas::live::protocol
