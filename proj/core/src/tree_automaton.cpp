#include "musat/tree_automaton.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scc_util.hpp"

namespace musat {

int Apt::rank() const {
  std::set<int> prios;
  for (const State& s : states) prios.insert(s.priority);
  return static_cast<int>(prios.size());
}

int Apt::max_priority() const {
  int m = 0;
  for (const State& s : states) m = std::max(m, s.priority);
  return m;
}

std::vector<int> complete_priorities(int n,
                                     const std::vector<std::vector<int>>& succ,
                                     const std::vector<std::optional<int>>& partial) {
  internal::SccResult comps = internal::strongly_connected_components(succ);
  std::vector<bool> cyclic = internal::cyclic_components(succ, comps);

  // Every cycle through q must visit an assigned priority at most Omega(q),
  // and Omega(q) is least with that property: the maximum over cycles of
  // the cycle's minimum assigned priority.  This keeps an inner loop that
  // regenerates only its own fixpoint at that fixpoint's level even when a
  // larger loop through an outer fixpoint shares states with it.
  //
  // Computed by value descent: q gets v iff it lies on a cycle avoiding all
  // assigned priorities below v, and v is the largest assigned value where
  // that happens.
  // A cycle visiting no assigned state at all signals a translation bug.
  {
    std::vector<std::vector<int>> unassigned(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      if (partial[static_cast<std::size_t>(q)]) continue;
      for (int w : succ[static_cast<std::size_t>(q)])
        if (!partial[static_cast<std::size_t>(w)])
          unassigned[static_cast<std::size_t>(q)].push_back(w);
    }
    internal::SccResult un_comps = internal::strongly_connected_components(unassigned);
    std::vector<bool> un_cyclic = internal::cyclic_components(unassigned, un_comps);
    for (bool c : un_cyclic)
      if (c) throw MusatError("priority completion: cycle without an assigned state");
  }

  std::vector<int> out(static_cast<std::size_t>(n), 0);
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int v2 = 0; v2 < n; ++v2) {
    auto sv = static_cast<std::size_t>(v2);
    if (partial[sv]) {
      out[sv] = *partial[sv];
      done[sv] = true;
    } else if (!cyclic[static_cast<std::size_t>(comps.comp[sv])]) {
      done[sv] = true;  // acyclic states keep 0
    }
  }

  std::set<int, std::greater<int>> values;
  for (int v2 = 0; v2 < n; ++v2)
    if (partial[static_cast<std::size_t>(v2)]) values.insert(*partial[static_cast<std::size_t>(v2)]);

  for (int v : values) {
    // Subgraph without assigned states below v.
    std::vector<std::vector<int>> sub(static_cast<std::size_t>(n));
    auto keep = [&](int q) {
      const auto& p = partial[static_cast<std::size_t>(q)];
      return !p || *p >= v;
    };
    for (int q = 0; q < n; ++q) {
      if (!keep(q)) continue;
      for (int w : succ[static_cast<std::size_t>(q)])
        if (keep(w)) sub[static_cast<std::size_t>(q)].push_back(w);
    }
    internal::SccResult sub_comps = internal::strongly_connected_components(sub);
    std::vector<bool> sub_cyclic = internal::cyclic_components(sub, sub_comps);
    for (int q = 0; q < n; ++q) {
      auto sq = static_cast<std::size_t>(q);
      if (done[sq] || !keep(q)) continue;
      if (sub_cyclic[static_cast<std::size_t>(sub_comps.comp[sq])]) {
        out[sq] = v;
        done[sq] = true;
      }
    }
  }
  for (int q = 0; q < n; ++q)
    if (!done[static_cast<std::size_t>(q)])
      throw MusatError("priority completion: cycle without an assigned state");
  return out;
}

Apt formula_to_apt(Formula f, const ClosureTable& table,
                   const TranslationOptions& options) {
  if (!table.levels_computed)
    throw MusatError("formula_to_apt requires the alternation output");
  if (!check_guarded(f)) throw MusatError("formula_to_apt requires a guarded formula");

  Apt a;

  std::set<int> atom_syms;
  std::function<void(Formula)> collect_atoms = [&](Formula g) {
    switch (g.op()) {
      case Op::Atom: case Op::NegAtom: atom_syms.insert(g.symbol()); return;
      case Op::And: case Op::Or: collect_atoms(g.left()); collect_atoms(g.right()); return;
      case Op::Diamond: case Op::Box: case Op::Mu: case Op::Nu:
        collect_atoms(g.child()); return;
      default: return;
    }
  };
  collect_atoms(f);
  a.atoms.assign(atom_syms.begin(), atom_syms.end());
  std::sort(a.atoms.begin(), a.atoms.end(), [](int x, int y) {
    return Formula::symbol_text(x) < Formula::symbol_text(y);
  });
  if (static_cast<int>(a.atoms.size()) > options.atom_cap)
    throw MusatError("alphabet cap exceeded: " + std::to_string(a.atoms.size()) +
                     " atoms mentioned, cap is " + std::to_string(options.atom_cap));
  auto atom_index = [&](int sym) {
    for (std::size_t i = 0; i < a.atoms.size(); ++i)
      if (a.atoms[i] == sym) return static_cast<int>(i);
    throw MusatError("unknown atom");
  };

  // One state per closure member; literal true/false members share the two
  // sink states appended at the end.
  std::vector<int> member_state(table.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    Op o = table.members[i].op();
    if (o == Op::Top || o == Op::Bot) continue;
    member_state[i] = next++;
  }
  int top_id = next++;
  int bot_id = next++;
  for (std::size_t i = 0; i < table.size(); ++i) {
    Op o = table.members[i].op();
    if (o == Op::Top) member_state[i] = top_id;
    if (o == Op::Bot) member_state[i] = bot_id;
  }

  a.states.resize(static_cast<std::size_t>(next));
  a.partial_priority.assign(static_cast<std::size_t>(next), std::nullopt);
  a.top_state = top_id;
  a.bot_state = bot_id;
  a.initial = member_state[0];

  auto state_of = [&](Formula g) { return member_state[static_cast<std::size_t>(table.index_of(g))]; };

  for (std::size_t i = 0; i < table.size(); ++i) {
    Formula g = table.members[i];
    if (g.op() == Op::Top || g.op() == Op::Bot) continue;
    Apt::State& st = a.states[static_cast<std::size_t>(member_state[i])];
    st.label = g.to_string();
    switch (g.op()) {
      case Op::Atom:
        st.kind = StateKind::LocalUniversal;
        st.atom_test = atom_index(g.symbol());
        break;
      case Op::NegAtom:
        st.kind = StateKind::LocalUniversal;
        st.atom_test = atom_index(g.symbol());
        st.negated = true;
        break;
      case Op::And:
        st.kind = StateKind::LocalUniversal;
        st.succ = {state_of(g.left()), state_of(g.right())};
        break;
      case Op::Or:
        st.kind = StateKind::LocalExistential;
        st.succ = {state_of(g.left()), state_of(g.right())};
        break;
      case Op::Diamond:
        st.kind = StateKind::ModalExistential;
        st.succ = {state_of(g.child())};
        break;
      case Op::Box:
        st.kind = StateKind::ModalUniversal;
        st.succ = {state_of(g.child())};
        break;
      case Op::Mu: case Op::Nu:
        st.kind = StateKind::LocalExistential;
        st.succ = {state_of(g.child().substitute(g.symbol(), g))};
        a.partial_priority[static_cast<std::size_t>(member_state[i])] = table.level_of(g);
        break;
      default:
        break;
    }
  }
  {
    Apt::State& top = a.states[static_cast<std::size_t>(top_id)];
    top.kind = StateKind::LocalUniversal;
    top.succ = {top_id};
    top.label = "true";
    a.partial_priority[static_cast<std::size_t>(top_id)] = 0;
    Apt::State& bot = a.states[static_cast<std::size_t>(bot_id)];
    bot.kind = StateKind::LocalExistential;
    bot.succ = {bot_id};
    bot.label = "false";
    a.partial_priority[static_cast<std::size_t>(bot_id)] = 1;
  }

  std::vector<std::vector<int>> graph(a.size());
  for (std::size_t q = 0; q < a.size(); ++q)
    graph[q] = a.successors_any_letter(static_cast<int>(q));
  std::vector<int> total =
      complete_priorities(static_cast<int>(a.size()), graph, a.partial_priority);
  for (std::size_t q = 0; q < a.size(); ++q) a.states[q].priority = total[q];
  return a;
}

namespace {

// Counts simple cycles through q, giving up once `limit` are found.
int count_cycles_through(const std::vector<std::vector<int>>& succ, int q, int limit) {
  int found = 0;
  std::vector<bool> visited(succ.size(), false);
  std::function<void(int)> dfs = [&](int v) {
    if (found >= limit) return;
    for (int w : succ[static_cast<std::size_t>(v)]) {
      if (w == q) {
        if (++found >= limit) return;
      } else if (!visited[static_cast<std::size_t>(w)]) {
        visited[static_cast<std::size_t>(w)] = true;
        dfs(w);
        visited[static_cast<std::size_t>(w)] = false;
      }
    }
  };
  dfs(q);
  return found;
}

}  // namespace

AptClass classify_apt(const Apt& a) {
  AptClass c;
  int n = static_cast<int>(a.size());
  std::vector<std::vector<int>> graph(a.size());
  for (std::size_t q = 0; q < a.size(); ++q)
    graph[q] = a.successors_any_letter(static_cast<int>(q));

  internal::SccResult comps = internal::strongly_connected_components(graph);
  c.weak = true;
  std::vector<int> comp_prio(static_cast<std::size_t>(comps.count), -1);
  for (int q = 0; q < n && c.weak; ++q) {
    int p = a.states[static_cast<std::size_t>(q)].priority;
    if (p != 0 && p != 1) { c.weak = false; break; }
    int& cp = comp_prio[static_cast<std::size_t>(comps.comp[static_cast<std::size_t>(q)])];
    if (cp == -1) cp = p;
    else if (cp != p) c.weak = false;
  }

  c.limit_linear = c.weak;
  if (c.limit_linear) {
    for (int q = 0; q < n; ++q) {
      if (a.states[static_cast<std::size_t>(q)].priority != 1) continue;
      if (count_cycles_through(graph, q, 2) != 1) { c.limit_linear = false; break; }
    }
  }

  // Limit determinism: for every odd priority p and universal state inside a
  // p-compartment, the successors that can still realize priority p (reach a
  // p-state through priorities <= p, sinks discounted) must be unique within
  // each strongly connected component.  Counting only realizing successors
  // keeps discharged side conjuncts (literals, closed greatest fixpoints)
  // out of the picture, and counting per component keeps branchings into
  // separate rejecting loops legal - both are exercised by the translation
  // and required for every limit-linear automaton to pass.
  c.limit_deterministic = true;
  std::set<int> odd_priorities;
  for (int q = 0; q < n; ++q)
    if (a.states[static_cast<std::size_t>(q)].priority % 2 == 1)
      odd_priorities.insert(a.states[static_cast<std::size_t>(q)].priority);

  for (int p : odd_priorities) {
    if (!c.limit_deterministic) break;
    // Subgraph of priorities <= p without the sinks.
    auto in_sub = [&](int v) {
      return v != a.top_state && v != a.bot_state &&
             a.states[static_cast<std::size_t>(v)].priority <= p;
    };
    // live[v]: a priority-p state is reachable from v inside the subgraph.
    std::vector<bool> live(a.size(), false);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
      if (in_sub(v) && a.states[static_cast<std::size_t>(v)].priority == p) {
        live[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    // Backward closure over subgraph edges.
    std::vector<std::vector<int>> pred(a.size());
    for (int v = 0; v < n; ++v) {
      if (!in_sub(v)) continue;
      for (int w : graph[static_cast<std::size_t>(v)])
        if (in_sub(w)) pred[static_cast<std::size_t>(w)].push_back(v);
    }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : pred[static_cast<std::size_t>(v)])
        if (!live[static_cast<std::size_t>(u)]) {
          live[static_cast<std::size_t>(u)] = true;
          stack.push_back(u);
        }
    }

    // Universal states reachable from a p-state through the subgraph.
    std::vector<bool> seen(a.size(), false);
    for (int v = 0; v < n; ++v)
      if (in_sub(v) && a.states[static_cast<std::size_t>(v)].priority == p &&
          !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : graph[static_cast<std::size_t>(v)]) {
        auto sw = static_cast<std::size_t>(w);
        if (in_sub(w) && !seen[sw]) {
          seen[sw] = true;
          stack.push_back(w);
        }
      }
    }
    for (int v = 0; v < n && c.limit_deterministic; ++v) {
      if (!seen[static_cast<std::size_t>(v)]) continue;
      const Apt::State& st = a.states[static_cast<std::size_t>(v)];
      if (st.kind != StateKind::LocalUniversal || st.atom_test >= 0) continue;
      std::set<int> components;
      for (int w : st.succ) {
        if (!in_sub(w) || !live[static_cast<std::size_t>(w)]) continue;
        int component = comps.comp[static_cast<std::size_t>(w)];
        if (!components.insert(component).second) c.limit_deterministic = false;
      }
    }
  }
  return c;
}

bool has_local_cycle(const Apt& a) {
  // Search for a cycle through local non-sink states; transitions of the
  // surviving local states do not depend on the letter, so one graph covers
  // all letters.
  int n = static_cast<int>(a.size());
  std::vector<std::vector<int>> local(a.size());
  for (int q = 0; q < n; ++q) {
    if (q == a.top_state || q == a.bot_state) continue;
    const Apt::State& st = a.states[static_cast<std::size_t>(q)];
    if (!kind_is_local(st.kind) || st.atom_test >= 0) continue;
    for (int w : st.succ) {
      if (w == a.top_state || w == a.bot_state) continue;
      if (kind_is_local(a.states[static_cast<std::size_t>(w)].kind))
        local[static_cast<std::size_t>(q)].push_back(w);
    }
  }
  internal::SccResult comps = internal::strongly_connected_components(local);
  std::vector<bool> cyclic = internal::cyclic_components(local, comps);
  for (int q = 0; q < n; ++q)
    if (cyclic[static_cast<std::size_t>(comps.comp[static_cast<std::size_t>(q)])]) return true;
  return false;
}

namespace {
const char* kind_str(StateKind k) {
  switch (k) {
    case StateKind::LocalExistential: return "or";
    case StateKind::LocalUniversal: return "and";
    case StateKind::ModalExistential: return "dia";
    case StateKind::ModalUniversal: return "box";
  }
  return "?";
}
}  // namespace

std::string apt_to_dot(const Apt& a) {
  std::ostringstream os;
  os << "digraph apt {\n  rankdir=LR;\n";
  for (std::size_t q = 0; q < a.size(); ++q) {
    const Apt::State& s = a.states[q];
    os << "  q" << q << " [label=\"" << q << ": " << s.label << "\\n"
       << kind_str(s.kind) << " / " << s.priority << "\"";
    if (static_cast<int>(q) == a.initial) os << ", penwidth=2";
    os << "];\n";
  }
  for (std::size_t q = 0; q < a.size(); ++q) {
    const Apt::State& s = a.states[q];
    if (s.atom_test >= 0) {
      std::string atom(Formula::symbol_text(a.atoms[static_cast<std::size_t>(s.atom_test)]));
      os << "  q" << q << " -> q" << a.top_state << " [label=\""
         << (s.negated ? "without " : "with ") << atom << "\"];\n";
      os << "  q" << q << " -> q" << a.bot_state << " [label=\""
         << (s.negated ? "with " : "without ") << atom << "\"];\n";
    } else {
      for (int w : s.succ) os << "  q" << q << " -> q" << w << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string apt_to_json(const Apt& a) {
  nlohmann::json j;
  j["initial"] = a.initial;
  j["top"] = a.top_state;
  j["bot"] = a.bot_state;
  j["atoms"] = nlohmann::json::array();
  for (int sym : a.atoms) j["atoms"].push_back(std::string(Formula::symbol_text(sym)));
  j["states"] = nlohmann::json::array();
  for (std::size_t q = 0; q < a.size(); ++q) {
    const Apt::State& s = a.states[q];
    nlohmann::json js;
    js["id"] = q;
    js["label"] = s.label;
    js["kind"] = kind_str(s.kind);
    js["priority"] = s.priority;
    if (a.partial_priority[q]) js["assigned_priority"] = *a.partial_priority[q];
    if (s.atom_test >= 0) {
      js["atom_test"] = std::string(Formula::symbol_text(a.atoms[static_cast<std::size_t>(s.atom_test)]));
      js["negated"] = s.negated;
    } else {
      js["succ"] = s.succ;
    }
    j["states"].push_back(js);
  }
  return j.dump(2);
}

}  // namespace musat
