#pragma once

#include "topogas/params.hpp"
#include "topogas/position.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace topogas {

/// Node identifier. Ids are handed out in increasing order and never reused within one gas.
enum class NodeId : std::uint32_t {};

constexpr std::uint32_t to_index(NodeId id) { return static_cast<std::uint32_t>(id); }

using DemonstratorId = std::uint32_t;

enum class EdgeKind : std::uint8_t { proximity = 0, trajectory = 1 };

std::string_view to_string(EdgeKind kind);
std::optional<EdgeKind> parse_edge_kind(std::string_view text);

struct Node {
  NodeId id{};
  Position pos;
  double error = 0.0;

  friend bool operator==(const Node &, const Node &) = default;
};

/// Undirected edge identity; always stored with a < b.
struct EdgeKey {
  NodeId a{};
  NodeId b{};
  EdgeKind kind = EdgeKind::proximity;

  static EdgeKey make(NodeId u, NodeId v, EdgeKind kind) { return u < v ? EdgeKey{u, v, kind} : EdgeKey{v, u, kind}; }
  bool touches(NodeId n) const { return a == n || b == n; }
  NodeId other(NodeId n) const { return a == n ? b : a; }

  friend auto operator<=>(const EdgeKey &, const EdgeKey &) = default;
};

struct Edge {
  EdgeKey key;
  int age = 0;

  friend bool operator==(const Edge &, const Edge &) = default;
};

/// Everything a gas holds. Nodes are kept sorted by id, edges by key.
struct GasState {
  Params params;
  std::uint64_t tick = 0;
  std::uint32_t next_id = 0;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::map<DemonstratorId, NodeId> last_winner;

  friend bool operator==(const GasState &, const GasState &) = default;
};

/// What a single step changed.
struct StepReport {
  std::optional<NodeId> winner;
  std::optional<NodeId> second;
  std::vector<NodeId> nodes_added;
  std::vector<NodeId> nodes_removed;
  std::vector<EdgeKey> edges_added;
  std::vector<EdgeKey> edges_removed;
};

struct PruneReport {
  std::vector<EdgeKey> edges_removed;
  std::vector<NodeId> nodes_removed;
};

/// Record of one node insertion, kept so callers can audit the error bookkeeping.
struct InsertionEvent {
  NodeId winner{};
  NodeId neighbor{};
  NodeId inserted{};
  double winner_error_before = 0.0;
  double neighbor_error_before = 0.0;
};

/// The modified growing neural gas.
///
/// One call to step() consumes one demonstrator position. Nodes are created on
/// demand when a winner's accumulated error exceeds max_error; every node's
/// error decays by error_decay per input, so the graph settles once the added
/// error is spread over enough nodes.
///
/// A Gas is single-writer. Copy it (or take snapshot()) to hand a consistent
/// state to readers on other threads.
class Gas {
public:
  explicit Gas(Params params = {});

  /// Rebuilds a gas from a full state. Throws ConfigError if the state breaks an invariant.
  static Gas from_state(GasState state);

  /// Consumes one input. Throws InputError (gas unchanged) on non-finite input.
  StepReport step(const Position &input, DemonstratorId demonstrator = 0);

  /// Nearest and second-nearest node, ties to the lower id. Needs at least two nodes.
  std::pair<NodeId, NodeId> winner_pair(const Position &input) const;

  /// Splits the edge between `winner` and its highest-error neighbour.
  /// Returns the new node, or nothing (and no change) if the winner has no neighbours.
  std::optional<NodeId> insert_node(NodeId winner);

  /// Drops edges older than max_age and, when enabled, nodes left without edges
  /// (never going below two nodes).
  PruneReport prune();

  /// Manual construction helpers; used by loaders and tests.
  NodeId add_node(const Position &pos, double error = 0.0);
  void connect(NodeId u, NodeId v, EdgeKind kind = EdgeKind::proximity, int age = 0);

  const Node *find_node(NodeId id) const;
  const Edge *find_edge(const EdgeKey &key) const;
  std::vector<NodeId> neighbors(NodeId id) const;

  const std::vector<Node> &nodes() const { return state_.nodes; }
  const std::vector<Edge> &edges() const { return state_.edges; }
  std::size_t node_count() const { return state_.nodes.size(); }
  std::uint64_t tick() const { return state_.tick; }
  const Params &params() const { return state_.params; }
  const GasState &state() const { return state_; }
  const std::map<DemonstratorId, NodeId> &last_winners() const { return state_.last_winner; }

  /// Replaces the parameters of a running gas. Validated first.
  void set_params(const Params &params);

  /// Insertions performed by the most recent step(), in order.
  const std::vector<InsertionEvent> &last_insertions() const { return last_insertions_; }

  std::shared_ptr<const Gas> snapshot() const { return std::make_shared<const Gas>(*this); }

  friend bool operator==(const Gas &a, const Gas &b) { return a.state_ == b.state_; }

private:
  Node *node_ptr(NodeId id);
  Edge *edge_ptr(const EdgeKey &key);
  bool refresh_edge(const EdgeKey &key);
  void remove_edge(const EdgeKey &key);
  void remove_node(NodeId id);
  PruneReport prune_sparing(std::optional<NodeId> spared);
  std::optional<NodeId> max_error_neighbor(NodeId id) const;

  GasState state_;
  std::vector<InsertionEvent> last_insertions_;
  // Set whenever some node may lack edges without an edge having just been pruned.
  bool isolation_check_due_ = true;
};

} // namespace topogas
