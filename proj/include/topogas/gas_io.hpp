#pragma once

#include "topogas/gas.hpp"

#include <string>
#include <string_view>

namespace topogas {

/// Canonical text form of a gas.
///
///   topogas-gas 1
///   tick <n>
///   next_id <n>
///   nodes <count>
///   <id> <x> <y> <z> <error>          one line per node, ascending id
///   edges <count>
///   <a> <b> <kind> <age>              one line per edge, ascending (a, b, kind)
///   last_winners <count>
///   <demonstrator> <node id>          ascending demonstrator
///   params
///   winner_attraction <v>
///   ...                               fixed order, see serialize_gas
///   end
///
/// Reals use the shortest representation that reads back to the same double,
/// so equal gases produce byte-identical documents.
std::string serialize_gas(const Gas &gas);

/// Throws ParseError (with line and field) on malformed input and ConfigError
/// when the document is well formed but describes an inconsistent graph.
Gas deserialize_gas(std::string_view document);

Gas load_gas_file(const std::string &path);
void save_gas_file(const Gas &gas, const std::string &path);

/// Graphviz rendering: one vertex per node (pinned at x, y), one line per edge.
std::string export_dot(const Gas &gas);

/// Node table `id,x,y,z,error`, one row per node.
std::string export_nodes_csv(const Gas &gas);

} // namespace topogas
