#include "topogas/gas.hpp"

#include "topogas/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace topogas {

namespace {

auto node_less = [](const Node &n, NodeId id) { return n.id < id; };
auto edge_less = [](const Edge &e, const EdgeKey &key) { return e.key < key; };

constexpr EdgeKind kEdgeKinds[] = {EdgeKind::proximity, EdgeKind::trajectory};

} // namespace

std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::trajectory ? "trajectory" : "proximity";
}

std::optional<EdgeKind> parse_edge_kind(std::string_view text) {
  if (text == "proximity") return EdgeKind::proximity;
  if (text == "trajectory") return EdgeKind::trajectory;
  return std::nullopt;
}

Gas::Gas(Params params) {
  params.validate();
  state_.params = params;
}

Gas Gas::from_state(GasState state) {
  state.params.validate();
  auto fail = [](const std::string &what) { throw ConfigError("inconsistent gas state: " + what); };

  for (std::size_t i = 0; i < state.nodes.size(); ++i) {
    const Node &n = state.nodes[i];
    if (i > 0 && !(state.nodes[i - 1].id < n.id)) fail("node ids not strictly increasing");
    if (to_index(n.id) >= state.next_id) fail("node id " + std::to_string(to_index(n.id)) + " >= next_id");
    if (!is_finite(n.pos)) fail("node " + std::to_string(to_index(n.id)) + " has a non-finite position");
    if (!(std::isfinite(n.error) && n.error >= 0.0)) fail("node " + std::to_string(to_index(n.id)) + " has a bad error");
  }
  auto has_node = [&](NodeId id) {
    auto it = std::lower_bound(state.nodes.begin(), state.nodes.end(), id, node_less);
    return it != state.nodes.end() && it->id == id;
  };
  for (std::size_t i = 0; i < state.edges.size(); ++i) {
    const Edge &e = state.edges[i];
    if (i > 0 && !(state.edges[i - 1].key < e.key)) fail("edges not strictly sorted or duplicated");
    if (!(e.key.a < e.key.b)) fail("edge endpoints must satisfy a < b");
    if (!has_node(e.key.a) || !has_node(e.key.b)) fail("edge references a missing node");
    if (e.age < 0) fail("negative edge age");
  }
  for (const auto &[demo, id] : state.last_winner)
    if (!has_node(id)) fail("last winner of demonstrator " + std::to_string(demo) + " is missing");

  Gas gas(state.params);
  gas.state_ = std::move(state);
  return gas;
}

void Gas::set_params(const Params &params) {
  params.validate();
  state_.params = params;
  isolation_check_due_ = true;
}

const Node *Gas::find_node(NodeId id) const {
  auto it = std::lower_bound(state_.nodes.begin(), state_.nodes.end(), id, node_less);
  return it != state_.nodes.end() && it->id == id ? &*it : nullptr;
}

Node *Gas::node_ptr(NodeId id) { return const_cast<Node *>(std::as_const(*this).find_node(id)); }

const Edge *Gas::find_edge(const EdgeKey &key) const {
  auto it = std::lower_bound(state_.edges.begin(), state_.edges.end(), key, edge_less);
  return it != state_.edges.end() && it->key == key ? &*it : nullptr;
}

Edge *Gas::edge_ptr(const EdgeKey &key) { return const_cast<Edge *>(std::as_const(*this).find_edge(key)); }

std::vector<NodeId> Gas::neighbors(NodeId id) const {
  std::vector<NodeId> out;
  for (const Edge &e : state_.edges)
    if (e.key.touches(id)) out.push_back(e.key.other(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NodeId Gas::add_node(const Position &pos, double error) {
  if (!is_finite(pos)) throw InputError("node position must be finite");
  if (!(std::isfinite(error) && error >= 0.0)) throw InputError("node error must be finite and >= 0");
  const NodeId id{state_.next_id++};
  state_.nodes.push_back(Node{id, pos, error});
  isolation_check_due_ = true;
  return id;
}

void Gas::connect(NodeId u, NodeId v, EdgeKind kind, int age) {
  if (u == v) throw PreconditionError("self-edges are not allowed");
  if (!find_node(u) || !find_node(v)) throw PreconditionError("edge endpoint does not exist");
  if (age < 0) throw PreconditionError("edge age must be >= 0");
  const EdgeKey key = EdgeKey::make(u, v, kind);
  refresh_edge(key);
  edge_ptr(key)->age = age;
}

// Creates the edge at age 0, or resets the age of an existing one. True if created.
bool Gas::refresh_edge(const EdgeKey &key) {
  auto it = std::lower_bound(state_.edges.begin(), state_.edges.end(), key, edge_less);
  if (it != state_.edges.end() && it->key == key) {
    it->age = 0;
    return false;
  }
  state_.edges.insert(it, Edge{key, 0});
  return true;
}

void Gas::remove_edge(const EdgeKey &key) {
  auto it = std::lower_bound(state_.edges.begin(), state_.edges.end(), key, edge_less);
  if (it != state_.edges.end() && it->key == key) state_.edges.erase(it);
}

void Gas::remove_node(NodeId id) {
  std::erase_if(state_.edges, [id](const Edge &e) { return e.key.touches(id); });
  std::erase_if(state_.nodes, [id](const Node &n) { return n.id == id; });
  std::erase_if(state_.last_winner, [id](const auto &entry) { return entry.second == id; });
}

std::pair<NodeId, NodeId> Gas::winner_pair(const Position &input) const {
  if (state_.nodes.size() < 2) throw PreconditionError("winner_pair needs at least two nodes");
  constexpr double inf = std::numeric_limits<double>::infinity();
  double best = inf;
  double runner_up = inf;
  NodeId first{};
  NodeId second{};
  // Nodes are visited in id order, so strict comparisons give ties to the lower id.
  for (const Node &n : state_.nodes) {
    const double d = squared_distance(input, n.pos);
    if (d < best) {
      second = first;
      runner_up = best;
      first = n.id;
      best = d;
    } else if (d < runner_up) {
      second = n.id;
      runner_up = d;
    }
  }
  return {first, second};
}

std::optional<NodeId> Gas::max_error_neighbor(NodeId id) const {
  std::optional<NodeId> best;
  double best_error = -1.0;
  for (NodeId n : neighbors(id)) {
    const double err = find_node(n)->error;
    if (err > best_error) {
      best = n;
      best_error = err;
    }
  }
  return best;
}

std::optional<NodeId> Gas::insert_node(NodeId winner) {
  if (!find_node(winner)) throw PreconditionError("insert_node: unknown winner");
  const auto neighbor = max_error_neighbor(winner);
  if (!neighbor) return std::nullopt;

  Node &w = *node_ptr(winner);
  Node &q = *node_ptr(*neighbor);
  const InsertionEvent partial{winner, *neighbor, NodeId{}, w.error, q.error};

  w.error *= 0.5;
  q.error *= 0.5;
  const double new_error = w.error + q.error;
  const Position pos = midpoint(w.pos, q.pos);
  const NodeId inserted = add_node(pos, new_error);

  for (EdgeKind kind : kEdgeKinds) {
    const EdgeKey split = EdgeKey::make(winner, *neighbor, kind);
    if (!find_edge(split)) continue;
    remove_edge(split);
    refresh_edge(EdgeKey::make(winner, inserted, kind));
    refresh_edge(EdgeKey::make(*neighbor, inserted, kind));
  }

  InsertionEvent event = partial;
  event.inserted = inserted;
  last_insertions_.push_back(event);
  return inserted;
}

PruneReport Gas::prune() { return prune_sparing(std::nullopt); }

PruneReport Gas::prune_sparing(std::optional<NodeId> spared) {
  PruneReport report;
  const int max_age = state_.params.max_age;
  for (const Edge &e : state_.edges)
    if (e.age > max_age) report.edges_removed.push_back(e.key);
  std::erase_if(state_.edges, [max_age](const Edge &e) { return e.age > max_age; });

  if (!state_.params.remove_isolated_nodes) return report;
  if (report.edges_removed.empty() && !isolation_check_due_) return report;

  std::vector<char> linked(state_.nodes.size(), 0);
  const auto slot = [this](NodeId id) {
    return std::lower_bound(state_.nodes.begin(), state_.nodes.end(), id, node_less) - state_.nodes.begin();
  };
  for (const Edge &e : state_.edges) {
    linked[slot(e.key.a)] = 1;
    linked[slot(e.key.b)] = 1;
  }
  std::vector<NodeId> isolated;
  for (std::size_t i = 0; i < state_.nodes.size(); ++i) {
    const NodeId id = state_.nodes[i].id;
    if (!linked[i] && !(spared && id == *spared)) isolated.push_back(id);
  }
  const bool spared_isolated = spared && !linked[slot(*spared)];
  std::size_t removed = 0;
  for (NodeId id : isolated) {
    if (state_.nodes.size() <= 2) break;
    remove_node(id);
    report.nodes_removed.push_back(id);
    ++removed;
  }
  isolation_check_due_ = removed < isolated.size() || spared_isolated;
  return report;
}

StepReport Gas::step(const Position &input, DemonstratorId demonstrator) {
  if (!is_finite(input)) throw InputError("input position must be finite");
  last_insertions_.clear();
  StepReport report;
  const Params &p = state_.params;

  // Bootstrap: the first two inputs become nodes.
  if (state_.nodes.size() < 2) {
    report.nodes_added.push_back(add_node(input, 0.0));
    if (state_.nodes.size() == 2 && p.grows_proximity_edges()) {
      const EdgeKey key = EdgeKey::make(state_.nodes[0].id, state_.nodes[1].id, EdgeKind::proximity);
      if (refresh_edge(key)) report.edges_added.push_back(key);
    }
    ++state_.tick;
    return report;
  }

  const auto [winner, second] = winner_pair(input);
  report.winner = winner;
  report.second = second;
  const Position second_pos = find_node(second)->pos;

  if (p.grows_proximity_edges()) {
    const EdgeKey key = EdgeKey::make(winner, second, EdgeKind::proximity);
    if (refresh_edge(key)) report.edges_added.push_back(key);
  }

  {
    Node &w = *node_ptr(winner);
    w.error += distance(input, w.pos);
    w.pos = w.pos + p.winner_attraction * (input - w.pos);
  }

  for (Edge &e : state_.edges)
    if (e.key.touches(winner)) ++e.age;

  PruneReport pruned = prune_sparing(winner);
  report.edges_removed = std::move(pruned.edges_removed);
  report.nodes_removed = std::move(pruned.nodes_removed);

  for (NodeId id : neighbors(winner)) {
    Node &n = *node_ptr(id);
    const Position target = p.neighbor_rule == NeighborRule::toward_input ? input - n.pos : input - second_pos;
    n.pos = n.pos + p.neighbor_attraction * target;
  }

  for (Node &n : state_.nodes) n.error = std::max(0.0, n.error - p.error_decay);

  if (find_node(winner)->error > p.max_error) {
    if (const auto inserted = insert_node(winner)) {
      report.nodes_added.push_back(*inserted);
      const InsertionEvent &ev = last_insertions_.back();
      for (EdgeKind kind : kEdgeKinds) {
        const EdgeKey split = EdgeKey::make(ev.winner, ev.neighbor, kind);
        if (!find_edge(EdgeKey::make(ev.winner, *inserted, kind))) continue;
        report.edges_removed.push_back(split);
        report.edges_added.push_back(EdgeKey::make(ev.winner, *inserted, kind));
        report.edges_added.push_back(EdgeKey::make(ev.neighbor, *inserted, kind));
      }
    }
  }

  if (p.grows_trajectory_edges()) {
    auto it = state_.last_winner.find(demonstrator);
    if (it != state_.last_winner.end() && it->second != winner && find_node(it->second)) {
      const EdgeKey key = EdgeKey::make(it->second, winner, EdgeKind::trajectory);
      if (refresh_edge(key)) report.edges_added.push_back(key);
    }
    state_.last_winner[demonstrator] = winner;
  }

  ++state_.tick;
  return report;
}

} // namespace topogas
