#include "musat/closure.hpp"

#include <algorithm>
#include <functional>

namespace musat {

ClosureTable closure(Formula f) {
  if (!f.closed()) throw MusatError("closure requires a closed formula");
  if (!is_clean(f)) throw MusatError("closure requires a clean formula");

  ClosureTable t;
  t.root = f;

  // theta over the syntactic subformulas.
  std::function<void(Formula)> collect = [&](Formula g) {
    switch (g.op()) {
      case Op::And: case Op::Or:
        collect(g.left()); collect(g.right()); return;
      case Op::Diamond: case Op::Box:
        collect(g.child()); return;
      case Op::Mu: case Op::Nu:
        t.binder.emplace(g.symbol(), g);
        collect(g.child()); return;
      default: return;
    }
  };
  collect(f);

  std::vector<Formula> work{f};
  t.members.push_back(f);
  t.index.emplace(f, 0);
  auto add = [&](Formula g) {
    if (t.index.emplace(g, static_cast<int>(t.members.size())).second) {
      t.members.push_back(g);
      work.push_back(g);
    }
  };
  while (!work.empty()) {
    Formula g = work.back();
    work.pop_back();
    switch (g.op()) {
      case Op::And: case Op::Or:
        add(g.left()); add(g.right()); break;
      case Op::Diamond: case Op::Box:
        add(g.child()); break;
      case Op::Mu: case Op::Nu:
        add(g.child().substitute(g.symbol(), g)); break;
      default: break;
    }
  }

  if (t.members.size() > f.node_count())
    throw MusatError("closure exceeded the syntax tree size");
  return t;
}

std::vector<Formula> fixpoint_subformulas(Formula f) {
  std::vector<Formula> out;
  std::function<void(Formula)> walk = [&](Formula g) {
    switch (g.op()) {
      case Op::And: case Op::Or: walk(g.left()); walk(g.right()); return;
      case Op::Diamond: case Op::Box: walk(g.child()); return;
      case Op::Mu: case Op::Nu:
        out.push_back(g);
        walk(g.child());
        return;
      default: return;
    }
  };
  walk(f);
  return out;
}

std::vector<std::pair<Formula, Formula>> fixpoint_dependencies(Formula f) {
  std::vector<std::pair<Formula, Formula>> deps;
  std::vector<Formula> fps = fixpoint_subformulas(f);
  for (Formula outer : fps) {
    for (Formula inner : fixpoint_subformulas(outer.child())) {
      // In a clean formula any occurrence of the outer variable inside the
      // inner body is free there.
      if (inner.child().contains_var(outer.symbol()))
        deps.emplace_back(outer, inner);
    }
  }
  return deps;
}

ClosureTable alternation(Formula f, ClosureTable t) {
  std::vector<Formula> fps = fixpoint_subformulas(f);
  std::unordered_map<Formula, std::vector<Formula>, FormulaHash> dependents;
  for (auto& [outer, inner] : fixpoint_dependencies(f))
    dependents[outer].push_back(inner);

  // Longest chain starting at g whose hops go to transitively dependent
  // fixpoints of alternating type.  Dependency edges point strictly into the
  // formula, so the recursion is well-founded.
  std::unordered_map<Formula, int, FormulaHash> memo;
  std::function<int(Formula)> chain = [&](Formula g) -> int {
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    int best = 1;
    // Transitive dependents of g, computed by closure over the edge lists.
    std::vector<Formula> stack{g};
    std::unordered_map<Formula, bool, FormulaHash> seen;
    seen[g] = true;
    while (!stack.empty()) {
      Formula cur = stack.back();
      stack.pop_back();
      auto dit = dependents.find(cur);
      if (dit == dependents.end()) continue;
      for (Formula nxt : dit->second) {
        if (seen.emplace(nxt, true).second) stack.push_back(nxt);
        if (nxt.op() != g.op()) best = std::max(best, 1 + chain(nxt));
      }
    }
    memo[g] = best;
    return best;
  };

  int depth = 0;
  for (Formula g : fps) {
    int d = chain(g);
    depth = std::max(depth, d);
    int al = (g.op() == Op::Mu) ? 2 * ((d + 1) / 2) - 1 : 2 * (d / 2);
    t.level[g.symbol()] = al;
  }
  t.depth = depth;
  t.levels_computed = true;
  return t;
}

const char* fragment_name(Fragment f) {
  switch (f) {
    case Fragment::LimitLinear: return "limit-linear";
    case Fragment::AFAconjunctive: return "alternation-free-aconjunctive";
    case Fragment::AlternationFree: return "alternation-free";
    case Fragment::Aconjunctive: return "aconjunctive";
    case Fragment::Unrestricted: return "unrestricted";
  }
  return "?";
}

namespace {

int count_occurrences(Formula f, int var) {
  switch (f.op()) {
    case Op::Var: return f.symbol() == var ? 1 : 0;
    case Op::And: case Op::Or:
      return count_occurrences(f.left(), var) + count_occurrences(f.right(), var);
    case Op::Diamond: case Op::Box:
      return count_occurrences(f.child(), var);
    case Op::Mu: case Op::Nu:
      return f.symbol() == var ? 0 : count_occurrences(f.child(), var);
    default: return 0;
  }
}

bool occurs_under_fixpoint(Formula f, int var, bool under) {
  switch (f.op()) {
    case Op::Var: return f.symbol() == var && under;
    case Op::And: case Op::Or:
      return occurs_under_fixpoint(f.left(), var, under) ||
             occurs_under_fixpoint(f.right(), var, under);
    case Op::Diamond: case Op::Box:
      return occurs_under_fixpoint(f.child(), var, under);
    case Op::Mu: case Op::Nu:
      if (f.symbol() == var) return false;
      return occurs_under_fixpoint(f.child(), var, true);
    default: return false;
  }
}

// At most one conjunct of every conjunction may mention a variable bound by
// an enclosing least fixpoint.
bool aconjunctive_walk(Formula f, std::vector<int>& mu_vars) {
  switch (f.op()) {
    case Op::And: {
      int carriers = 0;
      for (Formula part : {f.left(), f.right()}) {
        for (int v : mu_vars)
          if (count_occurrences(part, v) > 0) { ++carriers; break; }
      }
      if (carriers > 1) return false;
      return aconjunctive_walk(f.left(), mu_vars) &&
             aconjunctive_walk(f.right(), mu_vars);
    }
    case Op::Or:
      return aconjunctive_walk(f.left(), mu_vars) &&
             aconjunctive_walk(f.right(), mu_vars);
    case Op::Diamond: case Op::Box:
      return aconjunctive_walk(f.child(), mu_vars);
    case Op::Mu: {
      mu_vars.push_back(f.symbol());
      bool ok = aconjunctive_walk(f.child(), mu_vars);
      mu_vars.pop_back();
      return ok;
    }
    case Op::Nu:
      return aconjunctive_walk(f.child(), mu_vars);
    default:
      return true;
  }
}

}  // namespace

FragmentReport classify_fragment(Formula f, const ClosureTable& table) {
  if (!table.levels_computed)
    throw MusatError("classify_fragment requires the alternation output");

  FragmentReport r;
  r.alternation_depth = table.depth;
  r.alternation_free = table.depth <= 1;

  std::vector<int> mu_vars;
  r.aconjunctive = aconjunctive_walk(f, mu_vars);
  r.af_aconjunctive = r.alternation_free && r.aconjunctive;

  bool mu_linear = true;
  for (Formula g : fixpoint_subformulas(f)) {
    if (g.op() != Op::Mu) continue;
    if (count_occurrences(g.child(), g.symbol()) != 1 ||
        occurs_under_fixpoint(g.child(), g.symbol(), false)) {
      mu_linear = false;
      break;
    }
  }
  r.limit_linear = r.alternation_free && mu_linear;

  if (r.limit_linear) r.best_fragment = Fragment::LimitLinear;
  else if (r.af_aconjunctive) r.best_fragment = Fragment::AFAconjunctive;
  else if (r.alternation_free) r.best_fragment = Fragment::AlternationFree;
  else if (r.aconjunctive) r.best_fragment = Fragment::Aconjunctive;
  else r.best_fragment = Fragment::Unrestricted;
  return r;
}

}  // namespace musat
