// Fischer-Ladner closure, alternation analysis, and fragment classification.

#ifndef MUSAT_CLOSURE_HPP
#define MUSAT_CLOSURE_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "musat/formula.hpp"

namespace musat {

// Closure of a clean, closed, guarded formula.  Members are closed formulas
// (fixpoint bodies enter the closure already unfolded), kept in first-seen
// order so downstream automaton state numbering is deterministic.
struct ClosureTable {
  Formula root;
  std::vector<Formula> members;
  std::unordered_map<Formula, int, FormulaHash> index;

  // theta: bound variable symbol -> the syntactic fixpoint subformula that
  // binds it (unique since the formula is clean).
  std::unordered_map<int, Formula> binder;

  // Filled by alternation(): alternation depth of the root and, for every
  // syntactic fixpoint subformula, its alternation level (keyed by the bound
  // variable symbol, which also identifies closure instances of the binder).
  int depth = 0;
  std::unordered_map<int, int> level;
  bool levels_computed = false;

  bool contains(Formula f) const { return index.count(f) != 0; }
  int index_of(Formula f) const { return index.at(f); }
  std::size_t size() const { return members.size(); }

  // Alternation level of a closure member that is a fixpoint formula, looked
  // up through its binder variable.
  int level_of(Formula fixpoint_member) const {
    return level.at(fixpoint_member.symbol());
  }
};

// Least set containing f, closed under subformulas of non-fixpoint operators
// and under unfolding of fixpoint operators.  Requires f clean, closed, and
// guarded; |members| <= node_count(f).
ClosureTable closure(Formula f);

// Computes the alternation depth ad(f) and the per-fixpoint alternation
// levels via the dependent nesting order, and returns the completed table.
// Least fixpoints get odd levels, greatest fixpoints even levels.
ClosureTable alternation(Formula f, ClosureTable table);

enum class Fragment { LimitLinear, AFAconjunctive, AlternationFree, Aconjunctive, Unrestricted };

const char* fragment_name(Fragment f);

struct FragmentReport {
  bool limit_linear = false;
  bool alternation_free = false;
  bool aconjunctive = false;
  bool af_aconjunctive = false;
  Fragment best_fragment = Fragment::Unrestricted;
  int alternation_depth = 0;
};

// Classifies f against the syntactic fragments.  `table` must have been
// produced by alternation().
//
// Limit-linearity is taken as: alternation-free, and every least fixpoint
// binds a variable with exactly one occurrence, that occurrence not inside
// a fixpoint subformula of the body.  The exactly-one-occurrence condition
// alone does not bound the alternation depth (a greatest fixpoint variable
// may still thread through an inner least fixpoint), so alternation-freeness
// is required explicitly; this keeps limit-linear a subset of the
// alternation-free aconjunctive fragment.
FragmentReport classify_fragment(Formula f, const ClosureTable& table);

// Direct fixpoint dependencies: (outer, inner) pairs where the inner
// fixpoint's body mentions the outer's variable.  Exposed for testing the
// alternation computation against independent path enumeration.
std::vector<std::pair<Formula, Formula>> fixpoint_dependencies(Formula f);
std::vector<Formula> fixpoint_subformulas(Formula f);

}  // namespace musat

#endif  // MUSAT_CLOSURE_HPP
