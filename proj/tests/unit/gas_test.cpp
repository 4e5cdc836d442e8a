#include "topogas/errors.hpp"
#include "topogas/gas.hpp"
#include "topogas/gas_io.hpp"

#include "../support/experiment.hpp"
#include "../support/reference_stepper.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace topogas;

namespace {

NodeId id(std::uint32_t v) { return NodeId{v}; }

Gas two_node_gas(const Params &p = {}) {
  Gas g(p);
  g.add_node({0, 0, 0});
  g.add_node({100, 0, 0});
  g.connect(id(0), id(1));
  return g;
}

} // namespace

TEST_CASE("params validation names the violated bound") {
  CHECK_NOTHROW(Gas{});
  Params p;
  p.winner_attraction = 0.0;
  CHECK_THROWS_WITH_AS(Gas{p}, doctest::Contains("winner_attraction"), ConfigError);
  p = {};
  p.winner_attraction = 1.5;
  CHECK_THROWS_AS(Gas{p}, ConfigError);
  p = {};
  p.neighbor_attraction = -0.1;
  CHECK_THROWS_WITH_AS(Gas{p}, doctest::Contains("neighbor_attraction"), ConfigError);
  p = {};
  p.error_decay = 0.0;
  CHECK_THROWS_WITH_AS(Gas{p}, doctest::Contains("error_decay"), ConfigError);
  p = {};
  p.max_error = -1.0;
  CHECK_THROWS_WITH_AS(Gas{p}, doctest::Contains("max_error"), ConfigError);
  p = {};
  p.max_age = 0;
  CHECK_THROWS_WITH_AS(Gas{p}, doctest::Contains("max_age"), ConfigError);
  p = {};
  p.winner_attraction = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Gas{p}, ConfigError);
}

TEST_CASE("default parameters") {
  const Params p;
  CHECK(p.winner_attraction == 0.03);
  CHECK(p.neighbor_attraction == 0.0006);
  CHECK(p.error_decay == 10.0);
  CHECK(p.max_error == 20000.0);
  CHECK(p.max_age == 75);
  CHECK(p.edge_mode == EdgeMode::proximity);
  CHECK(p.remove_isolated_nodes);
  CHECK(p.neighbor_rule == NeighborRule::toward_input);
  const Gas g(p);
  CHECK(g.node_count() == 0);
  CHECK(g.edges().empty());
  CHECK(g.tick() == 0);
  CHECK(g.params().max_age == 75);
}

TEST_CASE("bootstrap creates nodes without a winner") {
  Gas g;
  auto r = g.step({0, 0, 0});
  CHECK_FALSE(r.winner);
  CHECK(g.node_count() == 1);
  CHECK(g.nodes()[0].pos == Position{0, 0, 0});
  CHECK(g.nodes()[0].error == 0.0);
  CHECK(g.edges().empty());

  r = g.step({5, 0, 0});
  CHECK_FALSE(r.winner);
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0].age == 0);
  CHECK(g.edges()[0].key.kind == EdgeKind::proximity);
  CHECK(g.tick() == 2);

  r = g.step({1, 0, 0});
  REQUIRE(r.winner);
  CHECK(*r.winner == id(0));
  CHECK(*r.second == id(1));
}

TEST_CASE("bootstrap in trajectory mode creates no proximity edge") {
  Params p;
  p.edge_mode = EdgeMode::trajectory;
  Gas g(p);
  g.step({0, 0, 0});
  g.step({5, 0, 0});
  CHECK(g.node_count() == 2);
  CHECK(g.edges().empty());
}

TEST_CASE("hand-traced step") {
  Gas g = two_node_gas();
  const auto r = g.step({10, 0, 0});
  CHECK(*r.winner == id(0));
  CHECK(*r.second == id(1));
  const Node &a = *g.find_node(id(0));
  const Node &b = *g.find_node(id(1));
  CHECK(a.pos.x == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(b.pos.x == doctest::Approx(99.946).epsilon(1e-12));
  CHECK(a.pos.y == 0.0);
  CHECK(b.pos.z == 0.0);
  CHECK(a.error == 0.0);
  CHECK(b.error == 0.0);
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0].age == 1);
  CHECK(g.tick() == 1);
}

TEST_CASE("hand-traced step agrees with the reference stepper") {
  reference::RefGas ref{Params{}};
  ref.nodes = {{0, 0, 0, 0, 0}, {1, 100, 0, 0, 0}};
  ref.edges = {{0, 1, 0, 0}};
  ref.next_id = 2;
  ref.step(10, 0, 0, 0);
  Gas g = two_node_gas();
  g.step({10, 0, 0});
  CHECK(reference::state_gap(ref, g) == doctest::Approx(0.0));
  CHECK(ref.nodes[0].x == doctest::Approx(0.3));
  CHECK(ref.nodes[1].x == doctest::Approx(99.946));
}

TEST_CASE("winner attraction is exact") {
  Gas g = two_node_gas();
  const Position input{10, 7, -3};
  const Position before = g.find_node(id(0))->pos;
  g.step(input);
  const Position expect = before + 0.03 * (input - before);
  CHECK(g.find_node(id(0))->pos == expect);
}

TEST_CASE("insertion trigger at 19995 + 30") {
  Gas g(Params{});
  g.add_node({0, 0, 0}, 19995.0);
  g.add_node({1000, 0, 0}, 100.0);
  g.connect(id(0), id(1));
  const auto r = g.step({30, 0, 0});
  REQUIRE(r.nodes_added.size() == 1);
  REQUIRE(g.last_insertions().size() == 1);
  const auto &ev = g.last_insertions()[0];
  CHECK(ev.winner == id(0));
  CHECK(ev.neighbor == id(1));
  // 19995 + 30 - 10 = 20015 > 20000, neighbour decayed to 90.
  CHECK(ev.winner_error_before == 20015.0);
  CHECK(ev.neighbor_error_before == 90.0);
  CHECK(g.find_node(id(0))->error == 20015.0 / 2);
  CHECK(g.find_node(id(2))->error == 20015.0 / 2 + 45.0);

  // Just below the threshold nothing happens.
  Gas h(Params{});
  h.add_node({0, 0, 0}, 19975.0);
  h.add_node({1000, 0, 0}, 100.0);
  h.connect(id(0), id(1));
  CHECK(h.step({30, 0, 0}).nodes_added.empty());
  CHECK(h.find_node(id(0))->error == 19995.0);
}

TEST_CASE("insert_node splits the edge to the highest-error neighbour") {
  Gas g;
  g.add_node({0, 0, 0}, 24000);
  g.add_node({10, 0, 0}, 6000);
  g.connect(id(0), id(1));
  const auto fresh = g.insert_node(id(0));
  REQUIRE(fresh);
  const Node &n = *g.find_node(*fresh);
  CHECK(n.pos == Position{5, 0, 0});
  CHECK(n.error == 15000);
  CHECK(g.find_node(id(0))->error == 12000);
  CHECK(g.find_node(id(1))->error == 3000);
  double total = 0;
  for (const Node &x : g.nodes()) total += x.error;
  CHECK(total == 30000);
  CHECK_FALSE(g.find_edge(EdgeKey::make(id(0), id(1), EdgeKind::proximity)));
  CHECK(g.find_edge(EdgeKey::make(id(0), *fresh, EdgeKind::proximity))->age == 0);
  CHECK(g.find_edge(EdgeKey::make(id(1), *fresh, EdgeKind::proximity))->age == 0);
}

TEST_CASE("insert_node with a zero-error neighbour") {
  Gas g;
  g.add_node({0, 0, 0}, 30000);
  g.add_node({0, 10, 0}, 0);
  g.connect(id(0), id(1));
  const auto fresh = g.insert_node(id(0));
  CHECK(g.find_node(*fresh)->error == 15000);
  CHECK(g.find_node(id(0))->error == 15000);
  CHECK(g.find_node(id(1))->error == 0);
}

TEST_CASE("insert_node without neighbours is a no-op") {
  Gas g;
  g.add_node({0, 0, 0}, 30000);
  g.add_node({5, 0, 0}, 0);
  const std::string before = serialize_gas(g);
  CHECK_FALSE(g.insert_node(id(0)));
  CHECK(serialize_gas(g) == before);
}

TEST_CASE("insert_node rewires every kind the split pair had") {
  Params p;
  p.edge_mode = EdgeMode::both;
  Gas g(p);
  g.add_node({0, 0, 0}, 30000);
  g.add_node({10, 0, 0}, 100);
  g.add_node({0, 10, 0}, 50);
  g.connect(id(0), id(1), EdgeKind::proximity, 5);
  g.connect(id(0), id(1), EdgeKind::trajectory, 7);
  g.connect(id(0), id(2), EdgeKind::proximity, 3);
  const auto fresh = *g.insert_node(id(0));
  for (EdgeKind k : {EdgeKind::proximity, EdgeKind::trajectory}) {
    CHECK_FALSE(g.find_edge(EdgeKey::make(id(0), id(1), k)));
    CHECK(g.find_edge(EdgeKey::make(id(0), fresh, k))->age == 0);
    CHECK(g.find_edge(EdgeKey::make(id(1), fresh, k))->age == 0);
  }
  CHECK(g.find_edge(EdgeKey::make(id(0), id(2), EdgeKind::proximity))->age == 3);
}

TEST_CASE("max-error neighbour ties go to the lower id") {
  Gas g;
  g.add_node({0, 0, 0}, 30000);
  g.add_node({10, 0, 0}, 500);
  g.add_node({-10, 0, 0}, 500);
  g.connect(id(0), id(2));
  g.connect(id(0), id(1));
  g.insert_node(id(0));
  CHECK(g.last_insertions().back().neighbor == id(1));
}

TEST_CASE("winner_pair") {
  Gas g;
  g.add_node({0, 0, 0});
  g.add_node({5, 0, 0});
  g.add_node({9, 0, 0});
  auto [w, s] = g.winner_pair({1, 0, 0});
  CHECK(w == id(0));
  CHECK(s == id(1));

  Gas one;
  one.add_node({0, 0, 0});
  CHECK_THROWS_AS(one.winner_pair({0, 0, 0}), PreconditionError);
}

TEST_CASE("winner_pair ties resolve to the lowest id regardless of insertion order") {
  // Ids 4 and 7 at the same spot, with throwaway nodes far away filling the other ids.
  for (int order = 0; order < 2; ++order) {
    GasState st;
    st.next_id = 8;
    for (std::uint32_t i = 0; i < 8; ++i) {
      const bool tied = i == 4 || i == 7;
      st.nodes.push_back({id(i), tied ? Position{3, 3, 0} : Position{1e6 + i * 10.0, 0, 0}, 0});
    }
    if (order == 1) std::swap(st.nodes[4].pos, st.nodes[7].pos);
    const Gas g = Gas::from_state(st);
    for (const Position &in : {Position{0, 0, 0}, Position{3, 3, 0}, Position{-50, 20, 8}}) {
      auto [w, s] = g.winner_pair(in);
      CHECK(w == id(4));
      CHECK(s == id(7));
    }
  }
}

TEST_CASE("prune is strict about max_age") {
  Gas g;
  for (int i = 0; i < 5; ++i) g.add_node({i * 10.0, 0, 0});
  g.connect(id(0), id(1), EdgeKind::proximity, 76);
  g.connect(id(1), id(2), EdgeKind::proximity, 75);
  g.connect(id(2), id(3), EdgeKind::proximity, 0);
  g.connect(id(3), id(4), EdgeKind::proximity, 0);
  const auto r = g.prune();
  REQUIRE(r.edges_removed.size() == 1);
  CHECK(r.edges_removed[0] == EdgeKey::make(id(0), id(1), EdgeKind::proximity));
  CHECK(g.find_edge(EdgeKey::make(id(1), id(2), EdgeKind::proximity)));
  // Node 0 lost its last edge.
  CHECK(r.nodes_removed == std::vector<NodeId>{id(0)});
  CHECK(g.node_count() == 4);
}

TEST_CASE("isolated-node removal can be disabled and respects the two-node floor") {
  Params keep;
  keep.remove_isolated_nodes = false;
  Gas g(keep);
  for (int i = 0; i < 3; ++i) g.add_node({i * 10.0, 0, 0});
  g.connect(id(0), id(1), EdgeKind::proximity, 80);
  g.prune();
  CHECK(g.node_count() == 3);

  Gas h;
  for (int i = 0; i < 3; ++i) h.add_node({i * 10.0, 0, 0});
  h.connect(id(0), id(1), EdgeKind::proximity, 80);
  const auto r = h.prune();
  CHECK(r.nodes_removed.size() == 1);
  CHECK(h.node_count() == 2);
}

TEST_CASE("the current winner survives pruning of its last edge") {
  Params p;
  p.edge_mode = EdgeMode::trajectory;
  p.max_age = 1;
  Gas g(p);
  g.add_node({0, 0, 0});
  g.add_node({10, 0, 0});
  g.add_node({1000, 0, 0});
  g.add_node({1010, 0, 0});
  g.connect(id(2), id(3), EdgeKind::trajectory);
  g.connect(id(0), id(1), EdgeKind::trajectory, 1);
  // Winner 0 ages its only edge past max_age: the edge goes, node 1 goes, node 0 stays.
  const auto r = g.step({1, 0, 0});
  CHECK(r.nodes_removed == std::vector<NodeId>{id(1)});
  CHECK(g.find_node(id(0)));
  CHECK(g.node_count() == 3);
}

TEST_CASE("step rejects non-finite input and leaves the gas untouched") {
  Gas g = two_node_gas();
  const std::string before = serialize_gas(g);
  CHECK_THROWS_AS(g.step({std::nan(""), 0, 0}), InputError);
  CHECK_THROWS_AS(g.step({0, std::numeric_limits<double>::infinity(), 0}), InputError);
  CHECK(serialize_gas(g) == before);
  CHECK(g.tick() == 0);
}

TEST_CASE("error decay clamps at zero") {
  Gas g = two_node_gas();
  g.step({0, 0, 0});
  for (const Node &n : g.nodes()) CHECK(n.error == 0.0);
}

TEST_CASE("trajectory edges link consecutive winners per demonstrator") {
  Params p;
  p.edge_mode = EdgeMode::trajectory;
  p.remove_isolated_nodes = false;
  Gas g(p);
  g.add_node({0, 0, 0});
  g.add_node({100, 0, 0});
  g.add_node({200, 0, 0});
  g.step({1, 0, 0}, 0);
  CHECK(g.edges().empty());
  g.step({199, 0, 0}, 1); // other demonstrator: no link to node 0
  CHECK(g.edges().empty());
  g.step({101, 0, 0}, 0);
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0].key == EdgeKey::make(id(0), id(1), EdgeKind::trajectory));
  g.step({102, 0, 0}, 0); // same winner twice: no self edge
  CHECK(g.edges().size() == 1);
  CHECK(g.last_winners().at(0) == id(1));
  CHECK(g.last_winners().at(1) == id(2));
}

TEST_CASE("second_offset neighbour rule moves neighbours by the second's offset") {
  Params p;
  p.neighbor_rule = NeighborRule::second_offset;
  Gas g(p);
  g.add_node({0, 0, 0});
  g.add_node({100, 0, 0});
  g.add_node({0, 100, 0});
  g.connect(id(0), id(1));
  g.connect(id(0), id(2));
  g.step({10, 0, 0});
  // Winner 0, second 1 at (100,0,0): offset (-90,0,0) applied to both neighbours.
  CHECK(g.find_node(id(1))->pos.x == doctest::Approx(100 - 0.0006 * 90));
  CHECK(g.find_node(id(2))->pos == Position{0.0006 * -90, 100, 0});
}

TEST_CASE("from_state rejects broken graphs") {
  GasState st;
  st.next_id = 2;
  st.nodes = {{id(0), {}, 0}, {id(1), {1, 0, 0}, 0}};
  st.edges = {{EdgeKey{id(0), id(5), EdgeKind::proximity}, 0}};
  CHECK_THROWS_AS(Gas::from_state(st), ConfigError);
  st.edges = {{EdgeKey{id(1), id(0), EdgeKind::proximity}, 0}};
  CHECK_THROWS_AS(Gas::from_state(st), ConfigError);
  st.edges = {};
  st.nodes[1].error = -1;
  CHECK_THROWS_AS(Gas::from_state(st), ConfigError);
  st.nodes[1].error = 0;
  st.last_winner[0] = id(9);
  CHECK_THROWS_AS(Gas::from_state(st), ConfigError);
}

TEST_CASE("connect and add_node guard their inputs") {
  Gas g;
  g.add_node({0, 0, 0});
  CHECK_THROWS_AS(g.connect(id(0), id(0)), PreconditionError);
  CHECK_THROWS_AS(g.connect(id(0), id(3)), PreconditionError);
  CHECK_THROWS_AS(g.add_node({0, 0, 0}, -1), InputError);
}

TEST_CASE("ids are never reused") {
  Gas g;
  for (int i = 0; i < 3; ++i) g.add_node({i * 1.0, 0, 0});
  g.connect(id(1), id(2), EdgeKind::proximity, 99);
  g.prune();
  CHECK(g.add_node({9, 9, 9}) == id(3));
}

TEST_CASE("step matches the reference stepper across configurations") {
  struct Case {
    EdgeMode mode;
    NeighborRule rule;
    bool remove;
    int max_age;
    double max_error;
    std::uint32_t demos;
  };
  const Case cases[] = {
      {EdgeMode::proximity, NeighborRule::toward_input, true, 75, 20000, 1},
      {EdgeMode::trajectory, NeighborRule::toward_input, true, 75, 5000, 3},
      {EdgeMode::both, NeighborRule::toward_input, true, 10, 3000, 2},
      {EdgeMode::proximity, NeighborRule::second_offset, true, 20, 3000, 1},
      {EdgeMode::both, NeighborRule::toward_input, false, 5, 2000, 4},
      {EdgeMode::proximity, NeighborRule::toward_input, true, 3, 1500, 1},
  };
  std::uint64_t seed = 100;
  for (const Case &c : cases) {
    Params p;
    p.edge_mode = c.mode;
    p.neighbor_rule = c.rule;
    p.remove_isolated_nodes = c.remove;
    p.max_age = c.max_age;
    p.max_error = c.max_error;
    Gas g(p);
    reference::RefGas ref(p);
    const auto inputs = support::random_inputs(seed++, 1500, c.demos % 2 == 0);
    std::size_t insertions = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const auto demo = static_cast<DemonstratorId>(i % c.demos);
      g.step(inputs[i], demo);
      insertions += g.last_insertions().size();
      ref.step(inputs[i].x, inputs[i].y, inputs[i].z, demo);
      const double gap = reference::state_gap(ref, g);
      REQUIRE(gap >= 0.0);
      REQUIRE(gap <= 1e-9);
    }
    CHECK(insertions > 0);
  }
}
