// Determinization and history-determinization of word automata:
//   - priority elimination (parity -> Buchi), limit determinism preserving
//   - circle method:        limit-linear co-Buchi  -> deterministic co-Buchi
//   - Miyano-Hayashi:       co-Buchi               -> deterministic co-Buchi
//   - permutation method:   limit-det. Buchi       -> deterministic parity
//   - focus method:         limit-det. co-Buchi    -> history-det. co-Buchi
//
// Every construction materializes only the fragment reachable from the
// initial state and asserts its size bound on completion.

#ifndef MUSAT_DETERMINIZATION_HPP
#define MUSAT_DETERMINIZATION_HPP

#include <cstdint>

#include "musat/word_automaton.hpp"

namespace musat {

// Saturating size bounds (UINT64_MAX when the true bound overflows).
std::uint64_t bound_parity_to_buchi(int n, int rank);      // (ceil((k+1)/2)+1) * n
std::uint64_t bound_circle(int n);                         // n^2 * 2^n
std::uint64_t bound_miyano_hayashi(int n);                 // 3^n
std::uint64_t bound_focus(int n, int accepting);           // (|F|+1) * 2^n
std::uint64_t bound_permutation(int n);                    // ceil(e * (n+1)!)

// Nondeterministic parity -> nondeterministic Buchi.  A run is re-accepted
// by guessing a position and an even priority p such that from there on no
// priority above p occurs and p recurs; the (q, p) copies enforce the guess.
WordAutomaton parity_to_buchi(const WordAutomaton& a);

// Drops states from which no accepting state is reachable (keeping the
// initial state).  Runs through dropped states were rejecting, so the
// language is untouched; what disappears is spurious nondeterminism toward
// dying branches, which matters when handing the automaton to the
// permutation method.
WordAutomaton prune_rejecting_buchi(const WordAutomaton& a);

// Deterministic co-Buchi automaton for a limit-linear co-Buchi input: the
// powerset is annotated with a token on one accepting cycle plus a retry
// counter.  The token follows its cycle while the letters allow it (pure
// self-loops at accepting states, synchronizing transitions, leave token and
// counter alone); on failure it advances two steps and the counter drops; at
// zero it jumps to the next accepting cycle in a fixed fair rotation.
// Accepting macro-states are those with a nonzero counter.
// If every state is accepting and the input is already deterministic, the
// input is returned unchanged.  Throws if the input is not limit-linear.
WordAutomaton circle_determinize(const WordAutomaton& a);

// Classical breakpoint construction: powerset plus the subset of runs that
// have stayed accepting since the last breakpoint; a macro-state is
// accepting iff that subset is nonempty.
WordAutomaton miyano_hayashi(const WordAutomaton& a);

struct PermutationResult {
  WordAutomaton automaton;
  int macro_states = 0;        // distinct (set, permutation) pairs reached
  int deterministic_part = 0;  // |Q_D| after the initial-state adjustment
};

// Deterministic parity automaton for a limit-deterministic Buchi input.
// Macro-states carry the nondeterministic-part subset and a partial
// permutation of deterministic-part states ordered by run seniority; the
// priority reports the leftmost permutation position that ended or visited
// an accepting state on the transition.  Throws if the input is not
// limit-deterministic.  If the initial state lies in the deterministic part
// a fresh nondeterministic copy of it is introduced first.
PermutationResult permutation_determinize_full(const WordAutomaton& a);
WordAutomaton permutation_determinize(const WordAutomaton& a);

// History-deterministic co-Buchi automaton for a limit-deterministic
// co-Buchi input: powerset states plus focused states (U, q) with q an
// accepting member of U.  Focused stepping is deterministic; when the focus
// leaves the accepting set it is dropped, and refocusing from unfocused
// states is the only nondeterminism.  The attached resolver refocuses onto
// the candidate whose run has stayed accepting the longest (ties broken by
// state index), tracked by a seniority list updated like a permutation.
WordAutomaton focus_history_determinize(const WordAutomaton& a);

}  // namespace musat

#endif  // MUSAT_DETERMINIZATION_HPP
