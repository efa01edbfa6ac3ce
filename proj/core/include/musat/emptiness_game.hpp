// Emptiness machinery for alternating tree automata: the strategy arena over
// macro-states, the tracking word automaton over arena edge labels, the
// product parity game against a (history-)deterministic tracker, and the
// membership acceptance game against a concrete structure.

#ifndef MUSAT_EMPTINESS_GAME_HPP
#define MUSAT_EMPTINESS_GAME_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "musat/kripke.hpp"
#include "musat/tree_automaton.hpp"
#include "musat/word_automaton.hpp"

namespace musat {

// Two-player max-parity game; player diamond wins a play iff the maximal
// priority seen infinitely often is even.  A node without successors is lost
// by its owner.
struct ParityGame {
  struct Node {
    bool owner_box = false;  // false: diamond moves, true: box moves
    int priority = 0;
    std::string name;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int>> succ;

  int add_node(bool owner_box, int priority, std::string name = "");
  void add_edge(int from, int to);
  std::size_t size() const { return nodes.size(); }
  int max_priority() const;
  bool is_buchi() const;  // priorities within {1,2}
};

std::string parity_game_to_dot(const ParityGame& g);

// Edge labels of the strategy arena; these are also the letters the tracking
// automaton reads.
struct ArenaLabel {
  enum class Kind { LetterChoice, LocalChoice, ModalPick, SerialStep };
  Kind kind = Kind::LetterChoice;
  // The letter: always meaningful for LetterChoice; for the other kinds only
  // in the explicit-letter arena (has_letter).
  Letter letter = 0;
  bool has_letter = true;
  // LocalChoice: chosen successor per local-existential state, sorted by
  // state id (two choice functions agreeing on the states present in the
  // source macro-state are identified).
  std::vector<std::pair<int, int>> choice;
  int pick = -1;  // ModalPick: the chosen modal-existential state

  std::string describe(const Apt& apt) const;
};

struct ArenaOptions {
  // Letter elision for satisfiability checking: literals are kept in the
  // macro-state until the modal step, a macro-state holding an atom and its
  // negation is an immediate loss for player diamond, and the only letter
  // offered is the one the collected literals dictate.
  bool satisfiability_mode = true;
  // Successor-forcing step at modal nodes that hold box states but no
  // diamond state.  Every world of a serial structure has a successor and
  // the box obligations apply to it, so without this edge such nodes would
  // be won by player diamond even when the obligations are unsatisfiable
  // (and satisfiable obligations could not be realized in an extracted
  // witness).  Disable only to reproduce the bare three-clause edge set.
  bool serial_step = true;
};

struct StrategyArena {
  struct Node {
    std::vector<int> states;  // macro-state: sorted automaton state ids
    bool has_letter = false;
    Letter letter = 0;
    bool owner_box = false;
    bool dead = false;  // rejecting-sink member or literal clash; diamond-owned dead end
  };
  struct Edge {
    int label;  // index into labels
    int target;
  };

  std::vector<Node> nodes;
  std::vector<std::vector<Edge>> out;
  std::vector<ArenaLabel> labels;
  int initial = 0;
  ArenaOptions options;

  std::size_t size() const { return nodes.size(); }
};

// Reachable strategy arena of the automaton from {q0}.  Player diamond owns
// plain macro-state nodes and letter-annotated nodes with pending local
// work; player box owns the modal letter-annotated nodes and resolves which
// branch to descend.  Macro-states drop the accepting sink on creation and
// nodes containing the rejecting sink are diamond-owned dead ends.
StrategyArena build_arena(const Apt& apt, const ArenaOptions& options = {});

std::string arena_to_dot(const StrategyArena& arena, const Apt& apt);

// The tracking transition table: states of the automaton read arena edge
// labels.  Local-existential states follow the choice function, conjunction
// states branch to all successors, the picked modal-existential state and
// all box states advance on modal edges, everything else stutters on the
// labels that do not concern it and dies on those that discharge it.
// `normalized` (the satisfiability pipeline) keeps literal states in place
// until the modal step discharges them and redirects transitions into the
// sinks to the empty set; the literal table resolves literals against the
// label's letter instead.
std::vector<int> tracking_transitions(const Apt& apt, int q, const ArenaLabel& label,
                                      bool normalized);

// Tracking automaton over the arena's label alphabet: same states as the
// automaton, priorities shifted up by one (so runs trapped in a least
// fixpoint become accepting), initial state q0.
WordAutomaton build_tracking(const Apt& apt, const StrategyArena& arena);

// Parity game product of the arena with a deterministic or
// history-deterministic automaton for the tracking language.  Arena moves
// pass through box-owned intermediate nodes where the tracker's
// nondeterminism is resolved; every node carries the tracker priority plus
// one, so player diamond wins exactly the plays the tracker rejects.
struct ProductGame {
  ParityGame game;
  int initial = 0;
  // Per game node: the arena node (targets for intermediates), the tracker
  // state before the pending step, and the pending edge label (-1 for
  // position nodes).
  std::vector<int> arena_node;
  std::vector<int> tracker_state;
  std::vector<int> label;

  bool is_position(int node) const { return label[static_cast<std::size_t>(node)] < 0; }
};

ProductGame build_product_game(const StrategyArena& arena, const WordAutomaton& tracker);

// Acceptance game of the automaton against a structure: nodes are all
// (world, state) pairs, player diamond owns disjunctive and diamond states,
// priorities are the automaton's.
ParityGame build_acceptance_game(const Apt& apt, const KripkeStructure& k);

}  // namespace musat

#endif  // MUSAT_EMPTINESS_GAME_HPP
