// Alternating parity tree automata over powerset alphabets, the translation
// from formulas, priority completion, and structural classification.

#ifndef MUSAT_TREE_AUTOMATON_HPP
#define MUSAT_TREE_AUTOMATON_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "musat/closure.hpp"
#include "musat/formula.hpp"

namespace musat {

// Letters are subsets of the mentioned atoms, encoded as bitmasks over
// `atoms` (atom i of the automaton corresponds to bit i).
using Letter = std::uint32_t;

enum class StateKind : std::uint8_t {
  LocalExistential,  // disjunctions, fixpoints, the rejecting sink
  LocalUniversal,    // conjunctions, literals, the accepting sink
  ModalExistential,  // diamonds
  ModalUniversal,    // boxes
};

inline bool kind_is_local(StateKind k) {
  return k == StateKind::LocalExistential || k == StateKind::LocalUniversal;
}
inline bool kind_is_modal(StateKind k) { return !kind_is_local(k); }

// Default bound on the number of distinct atoms (the alphabet is its
// powerset, so letters are capped at 2^16).
inline constexpr int kDefaultAtomCap = 16;

struct Apt {
  struct State {
    StateKind kind;
    int priority = 0;
    // Literal states branch on the letter: atom_test >= 0 names the atom
    // index whose presence is tested (negated flips the test); all other
    // states move to `succ` regardless of the letter.  Literal states move
    // to the accepting sink on success and the rejecting sink on failure.
    int atom_test = -1;
    bool negated = false;
    std::vector<int> succ;
    std::string label;
  };

  std::vector<State> states;
  int initial = 0;
  int top_state = -1;  // accepting sink
  int bot_state = -1;  // rejecting sink
  std::vector<int> atoms;  // interned atom symbols, index = alphabet bit
  // Priorities before completion; entries left empty were filled by
  // complete_priorities.
  std::vector<std::optional<int>> partial_priority;

  std::size_t size() const { return states.size(); }
  std::size_t alphabet_size() const { return std::size_t{1} << atoms.size(); }

  std::vector<int> delta(int q, Letter sigma) const {
    const State& s = states[static_cast<std::size_t>(q)];
    if (s.atom_test < 0) return s.succ;
    bool present = (sigma >> s.atom_test) & 1u;
    bool pass = s.negated ? !present : present;
    return {pass ? top_state : bot_state};
  }

  // Union of delta over all letters, without materializing the alphabet.
  std::vector<int> successors_any_letter(int q) const {
    const State& s = states[static_cast<std::size_t>(q)];
    if (s.atom_test < 0) return s.succ;
    return {top_state, bot_state};
  }

  // Number of distinct priorities in use.
  int rank() const;
  int max_priority() const;
};

struct AptClass {
  bool weak = false;
  bool limit_linear = false;
  bool limit_deterministic = false;
};

struct TranslationOptions {
  int atom_cap = kDefaultAtomCap;
};

// States are the closure members plus the two sinks; the initial state is
// the formula itself.  Fixpoint states carry their alternation level, the
// rejecting sink carries 1 and the accepting sink 0; the remaining states
// are completed per-cycle.  Requires f clean, closed, guarded and `table`
// produced by alternation().  Throws when f mentions more than
// `options.atom_cap` atoms.
Apt formula_to_apt(Formula f, const ClosureTable& table,
                   const TranslationOptions& options = {});

// Completes a partial priority assignment over a digraph: a state on some
// cycle receives the least p such that every cycle through it visits an
// assigned priority of at most p (the maximum over its cycles of the
// cycle's minimum assigned priority); states on no cycle receive 0.
// Throws if some cycle carries no assigned state.
std::vector<int> complete_priorities(int n,
                                     const std::vector<std::vector<int>>& succ,
                                     const std::vector<std::optional<int>>& partial);

// weak: every SCC is priority-homogeneous with value 0 or 1.
// limit-linear: weak, and every priority-1 state lies on exactly one cycle.
// limit-deterministic: for every odd priority p, every local-universal state
// inside a p-compartment has, per letter and per strongly connected
// component, at most one successor from which priority p remains realizable
// within the compartment (sinks discounted).  Successors that can never
// regenerate the odd priority - discharged literals, closed greatest
// fixpoints - do not count, and branchings into distinct rejecting loops are
// legal; both concessions are required for limit-linear automata to be
// limit-deterministic.
AptClass classify_apt(const Apt& a);

// True iff no cycle runs through local states only (checked per letter
// shape; literal states cannot close local cycles once the sinks are
// excluded).
bool has_local_cycle(const Apt& a);

std::string apt_to_dot(const Apt& a);
std::string apt_to_json(const Apt& a);

}  // namespace musat

#endif  // MUSAT_TREE_AUTOMATON_HPP
