#pragma once

#include "topogas/gas.hpp"
#include "topogas/params.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace topogas::live {

class Session;

/// JSON text frames, one object per frame, discriminated by "type".
///
/// Client to server:
///   {"type":"open", "map":"open_room", "params":{...}}   new session (map defaults to open_room)
///   {"type":"open", "session":"s1"}                      join an existing session
///   {"type":"input", "demonstrator":0, "x":..., "y":...}
///   {"type":"params", <any subset of the parameter fields>}
///
/// Server to client:
///   {"type":"open", "session", "map", "fixture", "params"}
///   {"type":"graph", "session", "tick", "node_count", "dropped", "nodes":[{id,x,y,error}], "edges":[{a,b,kind,age}]}
///   {"type":"params", "params":{...}}
///   {"type":"error", "message"}
namespace protocol {

using Json = nlohmann::json;

class ProtocolError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct OpenFrame {
  std::string map = "open_room";
  std::optional<std::string> session;
  Json params = Json::object();
};

struct InputFrame {
  DemonstratorId demonstrator = 0;
  double x = 0.0;
  double y = 0.0;
};

struct ParamsFrame {
  Json changes = Json::object();
};

using ClientFrame = std::variant<OpenFrame, InputFrame, ParamsFrame>;

/// Throws ProtocolError for malformed JSON, unknown types, or missing/ill-typed fields.
ClientFrame decode_client_frame(std::string_view text);

Json params_to_json(const Params &params);
/// Overlays the given fields on `base` and validates. Unknown fields or bad values throw ConfigError.
Params apply_params(Params base, const Json &fields);

std::string encode_open(const Session &session);
std::string encode_graph(const std::string &session_id, const Gas &gas, std::uint64_t dropped);
std::string encode_params(const Params &params);
std::string encode_error(std::string_view message);

} // namespace protocol
} // namespace topogas::live
