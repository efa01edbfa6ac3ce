// Nondeterministic / deterministic / history-deterministic parity word
// automata over opaque letter ids, with an ultimately-periodic membership
// test used as the language oracle throughout.

#ifndef MUSAT_WORD_AUTOMATON_HPP
#define MUSAT_WORD_AUTOMATON_HPP

#include <memory>
#include <string>
#include <vector>

#include "musat/formula.hpp"

namespace musat {

// Max-parity acceptance: a run is accepting iff the highest priority seen
// infinitely often is even.  Buchi automata use priorities {1,2} with
// F = priority 2; co-Buchi automata use {0,1} with F = priority 0.
enum class AcceptanceFlavor { Parity, Buchi, CoBuchi };

class WordAutomaton;

// Finite-memory chooser for the nondeterminism of a history-deterministic
// automaton: given the memory, the current state and the letter, returns a
// successor from delta(state, letter) and the next memory.
class Resolver {
 public:
  virtual ~Resolver() = default;
  virtual int initial_memory() const = 0;
  virtual std::pair<int, int> choose(int memory, int state, int letter) const = 0;
};

class WordAutomaton {
 public:
  AcceptanceFlavor flavor = AcceptanceFlavor::Parity;
  int initial = 0;
  std::vector<int> priority;
  std::vector<std::string> state_names;
  std::vector<std::string> letter_names;
  // delta[state][letter] -> sorted successor list.
  std::vector<std::vector<std::vector<int>>> delta;
  std::shared_ptr<const Resolver> resolver;  // optional

  int state_count() const { return static_cast<int>(priority.size()); }
  int letter_count() const { return static_cast<int>(letter_names.size()); }
  int rank() const;  // maximal priority
  bool deterministic() const;

  int add_state(int prio, std::string name = "");
  void add_edge(int from, int letter, int to);
  const std::vector<int>& successors(int state, int letter) const {
    return delta[static_cast<std::size_t>(state)][static_cast<std::size_t>(letter)];
  }

  bool accepting_state(int q) const {
    int p = priority[static_cast<std::size_t>(q)];
    return flavor == AcceptanceFlavor::Buchi ? p == 2 : p == 0;
  }
  std::vector<int> accepting_states() const;

  void check_flavor() const;  // priority ranges match the flavor
};

// u . v^omega with nonempty v; letters are automaton letter ids.
struct UPWord {
  std::vector<int> prefix;
  std::vector<int> period;
};

// Membership of an ultimately periodic word, by lasso search on the product
// of the automaton with the word positions: accepted iff a reachable cycle
// in the periodic part carries an even maximal priority.
bool membership_upword(const WordAutomaton& a, const UPWord& w);

// Runs the attached resolver on the word and reports whether the induced
// run is accepting.  Throws if no resolver is attached or the resolver
// leaves delta.
bool resolver_run_accepts(const WordAutomaton& a, const UPWord& w);

struct WordClass {
  bool weak = false;                // every SCC priority-homogeneous
  bool limit_linear = false;        // co-Buchi; see below
  bool limit_deterministic = false; // even compartments internally deterministic
};

// limit-linear (co-Buchi only): every accepting state lies on exactly one
// cycle of accepting states, not counting pure self-loops.  Self-loops at
// accepting states are tolerated as synchronizing transitions.
WordClass classify_word(const WordAutomaton& a);

// Reinterprets a weak parity automaton over priorities {1,2} as a co-Buchi
// automaton (2 -> accepting).  Throws if the automaton is not weak or uses
// other priorities.
WordAutomaton weak_to_cobuchi(const WordAutomaton& a);

std::string word_automaton_to_dot(const WordAutomaton& a);
std::string word_automaton_to_json(const WordAutomaton& a);
WordAutomaton word_automaton_from_json(const std::string& text);

// Test-vector files: JSON array of {"u": [letters...], "v": [...],
// "expected": bool} triples, letters by name.
struct UPWordVector {
  UPWord word;
  bool expected = false;
};
std::vector<UPWordVector> upword_vectors_from_json(const std::string& text,
                                                   const WordAutomaton& a);
std::string upword_vectors_to_json(const std::vector<UPWordVector>& vecs,
                                   const WordAutomaton& a);

}  // namespace musat

#endif  // MUSAT_WORD_AUTOMATON_HPP
