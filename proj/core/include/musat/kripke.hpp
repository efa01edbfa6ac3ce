// Serial pointed Kripke structures and the fixpoint semantics.
//
// eval_semantics is the reference evaluator used to verify everything the
// automata pipeline produces: satisfiability witnesses are accepted only if
// the initial world lands in the evaluated extension.

#ifndef MUSAT_KRIPKE_HPP
#define MUSAT_KRIPKE_HPP

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "musat/formula.hpp"

namespace musat {

struct ValidationError : MusatError {
  using MusatError::MusatError;
};

struct KripkeStructure {
  struct World {
    std::string id;
    std::set<int> atoms;  // interned atom symbols
  };
  std::vector<World> worlds;
  int initial = 0;
  std::vector<std::vector<int>> succ;  // successor indices per world

  std::size_t size() const { return worlds.size(); }

  // Seriality, initial index in range, successor indices in range.
  void validate() const;
  bool world_has_atom(int w, int atom) const {
    return worlds[static_cast<std::size_t>(w)].atoms.count(atom) != 0;
  }
};

// JSON form:
//   {"worlds":[{"id":"w0","atoms":["p"]}, ...],
//    "initial":"w0",
//    "edges":[["w0","w1"], ...]}
// Rejects duplicate ids, unknown ids, and non-serial structures.
KripkeStructure kripke_from_json(const std::string& text);
std::string kripke_to_json(const KripkeStructure& k);
KripkeStructure load_kripke_file(const std::string& path);

using WorldSet = std::set<int>;

// Partial map from variable symbols to world sets.
struct Valuation {
  std::unordered_map<int, WorldSet> map;
  bool defined(int var) const { return map.count(var) != 0; }
  const WorldSet& get(int var) const { return map.at(var); }
  Valuation with(int var, WorldSet s) const {
    Valuation v = *this;
    v.map[var] = std::move(s);
    return v;
  }
};

// Extension of f in k under eta, by structural recursion; fixpoints are
// evaluated by Knaster-Tarski iteration from the empty set (mu) or the full
// world set (nu), which converges within |W| rounds per fixpoint.
// Throws on a free variable missing from eta.
WorldSet eval_semantics(Formula f, const KripkeStructure& k, const Valuation& eta);

// w0 in the extension of a closed formula.
bool satisfies(Formula f, const KripkeStructure& k);

// Quotient by bisimilarity (partition refinement on labels and successor
// classes).  Mu-calculus formulas cannot tell bisimilar worlds apart, so
// extracted witnesses are folded through this before they are reported.
KripkeStructure bisimulation_quotient(const KripkeStructure& k);

}  // namespace musat

#endif  // MUSAT_KRIPKE_HPP
