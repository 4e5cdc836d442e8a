#include "topogas/errors.hpp"
#include "topogas/live/session.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <thread>

using namespace topogas;
using namespace topogas::live;

TEST_CASE("open_session hands out distinct ids") {
  SessionManager mgr;
  const auto a = mgr.open("open_room");
  const auto b = mgr.open("open_room");
  CHECK(a->id() != b->id());
  CHECK(mgr.size() == 2);
  CHECK(mgr.find(a->id()) == a);
  CHECK(a->map().name() == "open_room");
  CHECK_THROWS_AS(mgr.open("mixer"), ConfigError);
  Params bad;
  bad.max_age = 0;
  CHECK_THROWS_AS(mgr.open("open_room", bad), ConfigError);
  CHECK(mgr.find("nope") == nullptr);
}

TEST_CASE("a 10 Hz stream for 60 s advances the gas 600 ticks") {
  SessionManager mgr;
  const auto s = mgr.open("open_room");
  for (int k = 0; k < 600; ++k) {
    const auto ack = s->handle_input(0, 1000 + 300 * std::cos(k * 0.05), 1000 + 300 * std::sin(k * 0.05), k / 10.0);
    CHECK(ack.accepted);
  }
  CHECK(s->snapshot()->tick() == 600);
  CHECK(s->dropped() == 0);
}

TEST_CASE("a 200 Hz stream is capped at 100 accepted inputs per second") {
  SessionManager mgr;
  const auto s = mgr.open("open_room");
  std::vector<double> accepted;
  for (int k = 0; k < 2000; ++k) {
    const double t = k / 200.0;
    if (s->handle_input(0, 500 + k % 7, 500, t).accepted) accepted.push_back(t);
  }
  CHECK(accepted.size() <= 1000);
  CHECK(accepted.size() >= 900);
  CHECK(s->dropped() == 2000 - accepted.size());
  // No trailing one-second window holds more than 100 accepted inputs.
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    std::size_t j = i;
    while (j < accepted.size() && accepted[j] < accepted[i] + 1.0) ++j;
    CHECK(j - i <= 100);
  }
}

TEST_CASE("the cap is per demonstrator and can be disabled") {
  RateLimiter lim(2);
  CHECK(lim.admit(0, 0.0));
  CHECK(lim.admit(0, 0.1));
  CHECK_FALSE(lim.admit(0, 0.2));
  CHECK(lim.admit(1, 0.2));
  CHECK(lim.admit(0, 1.05));
  RateLimiter off(0);
  for (int i = 0; i < 1000; ++i) CHECK(off.admit(0, 0.0));
  CHECK_THROWS_AS(RateLimiter(-1), ConfigError);
}

TEST_CASE("non-finite input is rejected without touching the gas") {
  SessionManager mgr;
  const auto s = mgr.open("open_room");
  s->handle_input(0, 1, 1, 0);
  CHECK_THROWS_AS(s->handle_input(0, std::nan(""), 1, 0.1), InputError);
  CHECK_THROWS_AS(s->handle_input(0, 1, INFINITY, 0.2), InputError);
  CHECK(s->snapshot()->tick() == 1);
}

TEST_CASE("closed sessions reject inputs") {
  SessionManager mgr;
  const auto s = mgr.open("corridors");
  mgr.close(s->id());
  CHECK(s->closed());
  CHECK(mgr.find(s->id()) == nullptr);
  CHECK_THROWS_AS(s->handle_input(0, 1, 1, 0), PreconditionError);
  CHECK_THROWS_AS(s->set_params(Params{}), PreconditionError);
}

TEST_CASE("snapshots are immutable and show new nodes after an insertion") {
  SessionManager mgr(0);
  Params p;
  p.max_error = 500;
  const auto s = mgr.open("open_room", p);
  s->handle_input(0, 0, 0, 0);
  s->handle_input(0, 1000, 0, 0);
  const Snapshot before = s->snapshot();
  CHECK(before->node_count() == 2);
  int k = 0;
  while (s->snapshot()->node_count() == 2 && k < 1000) s->handle_input(0, 100 + (k++ % 3) * 400, 0, 0);
  CHECK(s->snapshot()->node_count() == 3);
  CHECK(before->node_count() == 2);
  CHECK(s->snapshot() == s->snapshot());
}

TEST_CASE("params can be changed on a live session") {
  SessionManager mgr;
  const auto s = mgr.open("open_room");
  Params p;
  p.max_age = 30;
  s->set_params(p);
  CHECK(s->params().max_age == 30);
  CHECK(s->snapshot()->params().max_age == 30);
  p.max_age = 0;
  CHECK_THROWS_AS(s->set_params(p), ConfigError);
}

TEST_CASE("concurrent writers and readers never observe a partial step") {
  SessionManager mgr(0);
  Params params;
  params.max_error = 800;
  params.max_age = 10;
  const auto s = mgr.open("open_room", params);
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!done) {
      const Snapshot snap = s->snapshot();
      for (const Edge &e : snap->edges())
        if (!snap->find_node(e.key.a) || !snap->find_node(e.key.b)) ++bad;
    }
  });
  std::vector<std::thread> writers;
  for (DemonstratorId d = 0; d < 3; ++d)
    writers.emplace_back([&, d] {
      for (int k = 0; k < 3000; ++k) s->handle_input(d, (k * 37 + d * 500) % 2000, (k * 91) % 2000, 0);
    });
  for (auto &w : writers) w.join();
  done = true;
  reader.join();
  CHECK(bad == 0);
  CHECK(s->snapshot()->tick() == 9000);
}

TEST_CASE("client attach counting") {
  SessionManager mgr;
  const auto s = mgr.open("open_room");
  CHECK(s->attach() == 1);
  CHECK(s->attach() == 2);
  CHECK(s->detach() == 1);
  CHECK(s->clients() == 1);
}
