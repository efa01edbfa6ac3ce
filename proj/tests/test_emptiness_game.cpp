#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <set>

#include "musat/determinization.hpp"
#include "musat/emptiness_game.hpp"
#include "musat/game_solver.hpp"
#include "test_support.hpp"

using namespace musat;
using test::Rng;

namespace {

struct Built {
  Apt apt;
  StrategyArena arena;
  WordAutomaton tracking;
};

Built build(const std::string& text, ArenaOptions options = {}) {
  auto a = test::analyze(text);
  Built b;
  b.apt = formula_to_apt(a.formula, a.table);
  b.arena = build_arena(b.apt, options);
  b.tracking = build_tracking(b.apt, b.arena);
  return b;
}

}  // namespace

TEST_CASE("contradictory literals lose for player diamond") {
  Built b = build("p & ~p");
  bool saw_dead = false;
  for (const auto& node : b.arena.nodes) saw_dead = saw_dead || node.dead;
  CHECK(saw_dead);

  WordAutomaton tracker = miyano_hayashi(weak_to_cobuchi(b.tracking));
  ProductGame product = build_product_game(b.arena, tracker);
  Solution s = solve_game(product.game);
  CHECK_FALSE(s.diamond_wins(product.initial));
}

TEST_CASE("a modal node without any obligation is won by player diamond") {
  Built b = build("p");
  // The macro-state empties out after the literal is discharged; the
  // resulting letter node has no moves and belongs to player box.
  int found = -1;
  for (std::size_t v = 0; v < b.arena.size(); ++v) {
    const auto& node = b.arena.nodes[v];
    if (node.has_letter && node.states.empty()) found = static_cast<int>(v);
  }
  // With letter elision, the literal stays until the modal step instead.
  bool empty_or_literal_only = found >= 0;
  if (!empty_or_literal_only) {
    for (std::size_t v = 0; v < b.arena.size(); ++v) {
      const auto& node = b.arena.nodes[v];
      if (!node.has_letter || node.dead) continue;
      bool all_literals = true;
      for (int q : node.states)
        all_literals = all_literals && b.apt.states[static_cast<std::size_t>(q)].atom_test >= 0;
      if (all_literals && node.owner_box && b.arena.out[v].empty()) found = static_cast<int>(v);
    }
  }
  REQUIRE(found >= 0);
  CHECK(b.arena.nodes[static_cast<std::size_t>(found)].owner_box);
  CHECK(b.arena.out[static_cast<std::size_t>(found)].empty());

  WordAutomaton tracker = miyano_hayashi(weak_to_cobuchi(b.tracking));
  ProductGame product = build_product_game(b.arena, tracker);
  CHECK(solve_game(product.game).diamond_wins(product.initial));
}

TEST_CASE("the bare edge set leaves empty modal nodes dead in explicit mode") {
  ArenaOptions literal;
  literal.satisfiability_mode = false;
  literal.serial_step = false;
  Built b = build("p", literal);
  // Under the satisfying letter the macro-state empties; the letter node
  // (empty set, sigma) has no successors and belongs to player box.
  bool found = false;
  for (std::size_t v = 0; v < b.arena.size(); ++v) {
    const auto& node = b.arena.nodes[v];
    if (node.has_letter && node.states.empty()) {
      found = true;
      CHECK(node.owner_box);
      CHECK(b.arena.out[v].empty());
    }
  }
  CHECK(found);
}

TEST_CASE("explicit-letter arena satisfies the three edge clauses") {
  ArenaOptions literal;
  literal.satisfiability_mode = false;
  literal.serial_step = false;
  for (const char* text : {"nu X. (p & []X)", "mu X. (q | <>X)", "p & (q | ~p)"}) {
    Built b = build(text, literal);
    for (std::size_t v = 0; v < b.arena.size(); ++v) {
      const auto& node = b.arena.nodes[v];
      for (const auto& edge : b.arena.out[v]) {
        const ArenaLabel& label = b.arena.labels[static_cast<std::size_t>(edge.label)];
        const auto& target = b.arena.nodes[static_cast<std::size_t>(edge.target)];
        switch (label.kind) {
          case ArenaLabel::Kind::LetterChoice:
            CHECK_FALSE(node.has_letter);
            CHECK(target.has_letter);
            CHECK(target.states == node.states);
            CHECK(target.letter == label.letter);
            break;
          case ArenaLabel::Kind::LocalChoice: {
            CHECK(node.has_letter);
            CHECK_FALSE(node.owner_box);
            CHECK(target.has_letter);
            CHECK(target.letter == node.letter);
            bool has_local = false;
            for (int q : node.states)
              has_local = has_local || kind_is_local(b.apt.states[static_cast<std::size_t>(q)].kind);
            CHECK(has_local);
            break;
          }
          case ArenaLabel::Kind::ModalPick: {
            CHECK(node.has_letter);
            CHECK(node.owner_box);
            CHECK_FALSE(target.has_letter);
            bool pick_present = false;
            for (int q : node.states) pick_present = pick_present || q == label.pick;
            CHECK(pick_present);
            CHECK(b.apt.states[static_cast<std::size_t>(label.pick)].kind ==
                  StateKind::ModalExistential);
            break;
          }
          case ArenaLabel::Kind::SerialStep:
            FAIL("serial step disabled for this arena");
            break;
        }
      }
    }
  }
}

TEST_CASE("arena updates recompute through the tracking table") {
  Rng rng(12001);
  for (int i = 0; i < 60; ++i) {
    auto fragment = static_cast<test::GenFragment>(i % 4);
    Formula f = test::random_formula(rng, fragment, 14);
    Built b;
    auto an = test::analyze(f.to_string());
    b.apt = formula_to_apt(an.formula, an.table);
    b.arena = build_arena(b.apt);
    for (std::size_t v = 0; v < b.arena.size(); ++v) {
      for (const auto& edge : b.arena.out[v]) {
        const ArenaLabel& label = b.arena.labels[static_cast<std::size_t>(edge.label)];
        const auto& src = b.arena.nodes[v];
        const auto& dst = b.arena.nodes[static_cast<std::size_t>(edge.target)];
        if (label.kind == ArenaLabel::Kind::LetterChoice) {
          CHECK(dst.states == src.states);
          continue;
        }
        std::set<int> expect;
        for (int q : src.states)
          for (int w : tracking_transitions(b.apt, q, label, true)) expect.insert(w);
        std::set<int> got(dst.states.begin(), dst.states.end());
        CHECK(got == expect);
      }
    }
  }
}

TEST_CASE("tracking transition table rows") {
  Built b = build("nu X. ((p & q) & (<>X & []X))");
  const Apt& apt = b.apt;

  int conj = -1, dia = -1, box = -1;
  for (std::size_t q = 0; q < apt.size(); ++q) {
    if (apt.states[q].kind == StateKind::LocalUniversal && apt.states[q].atom_test < 0 &&
        static_cast<int>(q) != apt.top_state)
      conj = static_cast<int>(q);
    if (apt.states[q].kind == StateKind::ModalExistential) dia = static_cast<int>(q);
    if (apt.states[q].kind == StateKind::ModalUniversal) box = static_cast<int>(q);
  }
  REQUIRE(conj >= 0);
  REQUIRE(dia >= 0);
  REQUIRE(box >= 0);

  ArenaLabel letter;
  letter.kind = ArenaLabel::Kind::LetterChoice;
  letter.letter = 3;
  for (std::size_t q = 0; q < apt.size(); ++q)
    if (static_cast<int>(q) != apt.top_state && static_cast<int>(q) != apt.bot_state)
      CHECK(tracking_transitions(apt, static_cast<int>(q), letter, false) ==
            std::vector<int>{static_cast<int>(q)});

  ArenaLabel local;
  local.kind = ArenaLabel::Kind::LocalChoice;
  local.letter = 3;
  // Conjunctions branch to all successors; modal states stutter.
  {
    std::vector<int> expect = apt.states[static_cast<std::size_t>(conj)].succ;
    std::sort(expect.begin(), expect.end());
    CHECK(tracking_transitions(apt, conj, local, false) == expect);
  }
  CHECK(tracking_transitions(apt, dia, local, false) == std::vector<int>{dia});
  CHECK(tracking_transitions(apt, box, local, false) == std::vector<int>{box});

  ArenaLabel pick;
  pick.kind = ArenaLabel::Kind::ModalPick;
  pick.letter = 3;
  pick.pick = dia;
  CHECK(tracking_transitions(apt, dia, pick, false) ==
        apt.states[static_cast<std::size_t>(dia)].succ);
  CHECK(tracking_transitions(apt, box, pick, false) ==
        apt.states[static_cast<std::size_t>(box)].succ);
  ArenaLabel other_pick = pick;
  other_pick.pick = box;  // not the chosen diamond: the trace dies
  CHECK(tracking_transitions(apt, dia, other_pick, false).empty());
}

TEST_CASE("tracking automaton shares states and shifts priorities") {
  Rng rng(12002);
  for (int i = 0; i < 80; ++i) {
    auto fragment = static_cast<test::GenFragment>(i % 4);
    Formula f = test::random_formula(rng, fragment, 16);
    auto an = test::analyze(f.to_string());
    Apt apt = formula_to_apt(an.formula, an.table);
    StrategyArena arena = build_arena(apt);
    WordAutomaton t = build_tracking(apt, arena);
    REQUIRE(t.state_count() == static_cast<int>(apt.size()));
    for (std::size_t q = 0; q < apt.size(); ++q)
      CHECK(t.priority[q] == apt.states[q].priority + 1);
    CHECK(t.initial == apt.initial);

    // Branching only at conjunction states.
    for (int q = 0; q < t.state_count(); ++q)
      for (int l = 0; l < t.letter_count(); ++l)
        if (t.successors(q, l).size() > 1)
          CHECK(apt.states[static_cast<std::size_t>(q)].kind == StateKind::LocalUniversal);
  }
}

TEST_CASE("tracking inherits weakness and limit determinism") {
  Rng rng(12003);
  for (int i = 0; i < 60; ++i) {
    Formula f = test::random_formula(rng, test::GenFragment::AlternationFree, 16);
    Built b;
    auto an = test::analyze(f.to_string());
    b.apt = formula_to_apt(an.formula, an.table);
    REQUIRE(classify_apt(b.apt).weak);
    b.arena = build_arena(b.apt);
    b.tracking = build_tracking(b.apt, b.arena);
    CHECK(classify_word(b.tracking).weak);
  }
  for (int i = 0; i < 60; ++i) {
    Formula f = test::random_formula(rng, test::GenFragment::Aconjunctive, 16);
    Built b;
    auto an = test::analyze(f.to_string());
    b.apt = formula_to_apt(an.formula, an.table);
    REQUIRE(classify_apt(b.apt).limit_deterministic);
    b.arena = build_arena(b.apt);
    b.tracking = build_tracking(b.apt, b.arena);
    WordAutomaton buchi = prune_rejecting_buchi(parity_to_buchi(b.tracking));
    CHECK(classify_word(buchi).limit_deterministic);
  }
}

TEST_CASE("determinizations preserve the tracking language") {
  // The tracking automata are where the constructions are actually used;
  // their self-loops come from stuttering (freeze-only letters), which the
  // circle pursuit and the other constructions must survive.
  Rng rng(12007);
  for (int i = 0; i < 40; ++i) {
    auto fragment = static_cast<test::GenFragment>(i % 4);
    Formula f = test::random_formula(rng, fragment, 12);
    auto an = test::analyze(f.to_string());
    Apt apt = formula_to_apt(an.formula, an.table);
    StrategyArena arena = build_arena(apt);
    WordAutomaton tracking = build_tracking(apt, arena);
    FragmentReport fr = classify_fragment(an.formula, an.table);

    std::vector<WordAutomaton> variants;
    if (fr.alternation_free) {
      WordAutomaton cobuchi = weak_to_cobuchi(tracking);
      variants.push_back(miyano_hayashi(cobuchi));
      if (classify_word(cobuchi).limit_linear)
        variants.push_back(circle_determinize(cobuchi));
      if (classify_word(cobuchi).limit_deterministic)
        variants.push_back(focus_history_determinize(cobuchi));
    }
    WordAutomaton buchi = prune_rejecting_buchi(parity_to_buchi(tracking));
    variants.push_back(buchi);
    if (classify_word(buchi).limit_deterministic)
      variants.push_back(permutation_determinize(buchi));

    for (const WordAutomaton& v : variants)
      for (int j = 0; j < 60; ++j) {
        UPWord w = test::random_upword(rng, tracking.letter_count(), 6, 6);
        CHECK(membership_upword(tracking, w) == membership_upword(v, w));
      }
  }
}

TEST_CASE("deterministic trackers give single-successor resolution nodes") {
  Built b = build("nu X. (p & []X)");
  WordAutomaton tracker = miyano_hayashi(weak_to_cobuchi(b.tracking));
  ProductGame product = build_product_game(b.arena, tracker);
  for (std::size_t v = 0; v < product.game.size(); ++v)
    if (!product.is_position(static_cast<int>(v)))
      CHECK(product.game.succ[v].size() == 1);
  // Position count within the arena x tracker bound.
  std::size_t positions = 0;
  for (std::size_t v = 0; v < product.game.size(); ++v)
    if (product.is_position(static_cast<int>(v))) positions++;
  CHECK(positions <= b.arena.size() * static_cast<std::size_t>(tracker.state_count()));
}

TEST_CASE("local stuttering between modal steps is bounded") {
  Rng rng(12004);
  for (int i = 0; i < 40; ++i) {
    auto fragment = static_cast<test::GenFragment>(i % 4);
    Formula f = test::random_formula(rng, fragment, 14);
    auto an = test::analyze(f.to_string());
    Apt apt = formula_to_apt(an.formula, an.table);
    StrategyArena arena = build_arena(apt);

    // Longest chain of consecutive non-modal edges; the subgraph they span
    // must be acyclic and shallower than the state count.
    std::vector<std::vector<int>> local(arena.size());
    for (std::size_t v = 0; v < arena.size(); ++v)
      for (const auto& e : arena.out[v]) {
        const ArenaLabel& label = arena.labels[static_cast<std::size_t>(e.label)];
        if (label.kind == ArenaLabel::Kind::LocalChoice ||
            label.kind == ArenaLabel::Kind::LetterChoice)
          local[v].push_back(e.target);
      }
    std::vector<int> depth(arena.size(), -1);
    std::vector<int> visiting(arena.size(), 0);
    std::function<int(int)> longest = [&](int v) -> int {
      if (depth[static_cast<std::size_t>(v)] >= 0) return depth[static_cast<std::size_t>(v)];
      REQUIRE(visiting[static_cast<std::size_t>(v)] == 0);
      visiting[static_cast<std::size_t>(v)] = 1;
      int best = 0;
      for (int w : local[static_cast<std::size_t>(v)]) best = std::max(best, 1 + longest(w));
      visiting[static_cast<std::size_t>(v)] = 0;
      depth[static_cast<std::size_t>(v)] = best;
      return best;
    };
    for (std::size_t v = 0; v < arena.size(); ++v)
      CHECK(longest(static_cast<int>(v)) <= static_cast<int>(apt.size()) + 1);
  }
}

TEST_CASE("acceptance game has exactly worlds times states nodes") {
  Rng rng(12005);
  for (int i = 0; i < 30; ++i) {
    Formula f = test::random_formula(rng, test::GenFragment::AlternationFree, 12);
    auto an = test::analyze(f.to_string());
    Apt apt = formula_to_apt(an.formula, an.table);
    KripkeStructure k = test::random_kripke(rng, 1 + i % 5, {"p", "q"});
    ParityGame g = build_acceptance_game(apt, k);
    CHECK(g.size() == k.size() * apt.size());
  }
}

TEST_CASE("greatest diamond fixpoint wins everywhere") {
  Rng rng(12006);
  auto an = test::analyze("nu X. <>X");
  Apt apt = formula_to_apt(an.formula, an.table);
  for (int i = 0; i < 20; ++i) {
    KripkeStructure k = test::random_kripke(rng, 1 + i % 5, {"p"});
    ParityGame g = build_acceptance_game(apt, k);
    Solution s = solve_parity(g);
    int initial = k.initial * static_cast<int>(apt.size()) + apt.initial;
    CHECK(s.diamond_wins(initial));
  }
}

TEST_CASE("arena and game dot exports") {
  Built b = build("nu X. (p & []X)");
  CHECK(arena_to_dot(b.arena, b.apt).find("digraph") == 0);
  WordAutomaton tracker = miyano_hayashi(weak_to_cobuchi(b.tracking));
  ProductGame product = build_product_game(b.arena, tracker);
  CHECK(parity_game_to_dot(product.game).find("digraph") == 0);
}
