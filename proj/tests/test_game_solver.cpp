#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "musat/game_solver.hpp"
#include "test_support.hpp"

using namespace musat;
using test::Rng;

namespace {

ParityGame one_node_loop(int priority) {
  ParityGame g;
  g.add_node(false, priority);
  g.add_edge(0, 0);
  return g;
}

// Checks the returned strategies by deterministic unrolling: on every node
// won and owned by a player, fixing that player's strategy and quantifying
// over all positional opponent strategies keeps the play winning.
void check_strategies(const ParityGame& g, const Solution& s) {
  for (int player = 0; player < 2; ++player) {
    bool box_player = player == 1;
    const auto& strategy = box_player ? s.box_strategy : s.diamond_strategy;
    std::vector<int> opp_nodes;
    std::uint64_t combos = 1;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (g.nodes[v].owner_box != box_player && !g.succ[v].empty()) {
        opp_nodes.push_back(static_cast<int>(v));
        combos *= g.succ[v].size();
      }
    if (combos > 4000) continue;

    for (std::uint64_t c = 0; c < combos; ++c) {
      std::vector<int> choice(g.size(), -1);
      std::uint64_t rest = c;
      for (int v : opp_nodes) {
        auto deg = static_cast<std::uint64_t>(g.succ[static_cast<std::size_t>(v)].size());
        choice[static_cast<std::size_t>(v)] =
            g.succ[static_cast<std::size_t>(v)][static_cast<std::size_t>(rest % deg)];
        rest /= deg;
      }
      for (std::size_t start = 0; start < g.size(); ++start) {
        if (s.winner_box[start] != box_player) continue;
        // Walk the unique play.
        std::vector<int> seen_at(g.size(), -1);
        std::vector<int> path;
        int v = static_cast<int>(start);
        for (;;) {
          if (seen_at[static_cast<std::size_t>(v)] >= 0) {
            int max_prio = 0;
            for (std::size_t i = static_cast<std::size_t>(seen_at[static_cast<std::size_t>(v)]);
                 i < path.size(); ++i)
              max_prio = std::max(max_prio, g.nodes[static_cast<std::size_t>(path[i])].priority);
            CHECK((max_prio % 2 == 1) == box_player);
            break;
          }
          seen_at[static_cast<std::size_t>(v)] = static_cast<int>(path.size());
          path.push_back(v);
          int next;
          if (g.nodes[static_cast<std::size_t>(v)].owner_box == box_player) {
            auto it = strategy.find(v);
            REQUIRE(it != strategy.end());
            next = it->second;
          } else {
            if (g.succ[static_cast<std::size_t>(v)].empty()) {
              // Opponent stuck: the strategy owner wins.
              CHECK(g.nodes[static_cast<std::size_t>(v)].owner_box != box_player);
              break;
            }
            next = choice[static_cast<std::size_t>(v)];
          }
          v = next;
        }
      }
    }
  }
}

}  // namespace

TEST_CASE("single loops") {
  Solution even = solve_parity(one_node_loop(0));
  CHECK(even.diamond_wins(0));
  Solution odd = solve_parity(one_node_loop(1));
  CHECK_FALSE(odd.diamond_wins(0));
}

TEST_CASE("dead ends lose for their owner") {
  ParityGame g;
  g.add_node(false, 0);  // diamond, stuck
  g.add_node(true, 0);   // box, stuck
  Solution s = solve_parity(g);
  CHECK_FALSE(s.diamond_wins(0));
  CHECK(s.diamond_wins(1));
  CHECK(s.diamond_strategy.empty());
  CHECK(s.box_strategy.empty());
}

TEST_CASE("regions partition and strategies win on random games") {
  Rng rng(13001);
  for (int i = 0; i < 150; ++i) {
    ParityGame g = test::random_parity_game(rng, 2 + i % 9, 0, 3, 2, true);
    Solution s = solve_parity(g);
    REQUIRE(s.winner_box.size() == g.size());
    if (g.size() <= 12) check_strategies(g, s);
  }
}

TEST_CASE("agreement with exhaustive strategy enumeration") {
  // All two-node games over priorities {0,1,2}, every ownership and edge
  // pattern.
  int games = 0;
  for (int owners = 0; owners < 4; ++owners)
    for (int p0 = 0; p0 < 3; ++p0)
      for (int p1 = 0; p1 < 3; ++p1)
        for (int edges = 0; edges < 16; ++edges) {
          ParityGame g;
          g.add_node(owners & 1, p0);
          g.add_node(owners & 2, p1);
          if (edges & 1) g.add_edge(0, 0);
          if (edges & 2) g.add_edge(0, 1);
          if (edges & 4) g.add_edge(1, 0);
          if (edges & 8) g.add_edge(1, 1);
          std::vector<bool> expect = test::brute_force_winners_box(g);
          Solution s = solve_parity(g);
          for (std::size_t v = 0; v < g.size(); ++v)
            REQUIRE(s.winner_box[v] == expect[v]);
          ++games;
        }
  CHECK(games == 4 * 9 * 16);

  // Seeded systematic sample of larger games, degree kept small so the
  // strategy spaces stay enumerable.
  Rng rng(13002);
  for (int i = 0; i < 4000; ++i) {
    ParityGame g = test::random_parity_game(rng, 3 + i % 3, 0, 2, 2, true);
    std::vector<bool> expect = test::brute_force_winners_box(g);
    Solution s = solve_parity(g);
    for (std::size_t v = 0; v < g.size(); ++v) CHECK(s.winner_box[v] == expect[v]);
  }
}

TEST_CASE("buchi solver agrees with the recursive solver") {
  Rng rng(13003);
  for (int i = 0; i < 500; ++i) {
    ParityGame g = test::random_parity_game(rng, 2 + i % 49, 1, 2, 3, true);
    Solution a = solve_buchi(g);
    Solution b = solve_parity(g);
    for (std::size_t v = 0; v < g.size(); ++v) CHECK(a.winner_box[v] == b.winner_box[v]);
    if (g.size() <= 12) check_strategies(g, a);
  }
}

TEST_CASE("buchi solver validates priorities") {
  ParityGame g = one_node_loop(3);
  CHECK_THROWS_AS(solve_buchi(g), MusatError);
}

TEST_CASE("no even cycle means player box wins everywhere") {
  // A chain of priority-2 nodes ending in a priority-1 self-loop: the only
  // cycle is odd.
  ParityGame g;
  g.add_node(false, 2);
  g.add_node(true, 2);
  g.add_node(false, 1);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 2);
  Solution s = solve_buchi(g);
  for (std::size_t v = 0; v < g.size(); ++v) CHECK_FALSE(s.diamond_wins(static_cast<int>(v)));
}

TEST_CASE("pgsolver round trip") {
  Rng rng(13004);
  for (int i = 0; i < 50; ++i) {
    ParityGame g = test::random_parity_game(rng, 1 + i % 8, 0, 4, 3, true);
    g.nodes[0].name = "start node";
    ParityGame h = parity_game_from_pgsolver(parity_game_to_pgsolver(g));
    REQUIRE(h.size() == g.size());
    CHECK(h.nodes[0].name == "start node");
    Solution sg = solve_parity(g);
    Solution sh = solve_parity(h);
    for (std::size_t v = 0; v < g.size(); ++v) {
      CHECK(h.nodes[v].priority == g.nodes[v].priority);
      CHECK(h.nodes[v].owner_box == g.nodes[v].owner_box);
      CHECK(sg.winner_box[v] == sh.winner_box[v]);
    }
  }
  CHECK_THROWS_AS(parity_game_from_pgsolver("0 zero 1 -;"), MusatError);
}
