#include "musat/word_automaton.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "scc_util.hpp"

namespace musat {

int WordAutomaton::rank() const {
  int m = 0;
  for (int p : priority) m = std::max(m, p);
  return m;
}

bool WordAutomaton::deterministic() const {
  for (const auto& row : delta)
    for (const auto& cell : row)
      if (cell.size() > 1) return false;
  return true;
}

int WordAutomaton::add_state(int prio, std::string name) {
  int id = state_count();
  priority.push_back(prio);
  state_names.push_back(name.empty() ? "q" + std::to_string(id) : std::move(name));
  delta.emplace_back(letter_names.size());
  return id;
}

void WordAutomaton::add_edge(int from, int letter, int to) {
  auto& cell = delta[static_cast<std::size_t>(from)][static_cast<std::size_t>(letter)];
  auto it = std::lower_bound(cell.begin(), cell.end(), to);
  if (it == cell.end() || *it != to) cell.insert(it, to);
}

std::vector<int> WordAutomaton::accepting_states() const {
  std::vector<int> out;
  for (int q = 0; q < state_count(); ++q)
    if (accepting_state(q)) out.push_back(q);
  return out;
}

void WordAutomaton::check_flavor() const {
  for (int p : priority) {
    bool ok = true;
    if (flavor == AcceptanceFlavor::Buchi) ok = (p == 1 || p == 2);
    if (flavor == AcceptanceFlavor::CoBuchi) ok = (p == 0 || p == 1);
    if (!ok) throw MusatError("priority outside the acceptance flavor's range");
  }
}

// ---------------------------------------------------------------------------
// Ultimately periodic membership
// ---------------------------------------------------------------------------

namespace {

struct WordProduct {
  // Product states (q, pos) with pos in [0, |u|+|v|); pos advances and wraps
  // from the last position back to |u|.
  int total;
  int wrap_from, wrap_to;
  const WordAutomaton* a;
  const UPWord* w;

  int letter_at(int pos) const {
    int ul = static_cast<int>(w->prefix.size());
    return pos < ul ? w->prefix[static_cast<std::size_t>(pos)]
                    : w->period[static_cast<std::size_t>(pos - ul)];
  }
  int next_pos(int pos) const { return pos == wrap_from ? wrap_to : pos + 1; }
  int encode(int q, int pos) const { return q * total + pos; }
};

}  // namespace

bool membership_upword(const WordAutomaton& a, const UPWord& w) {
  if (w.period.empty()) throw MusatError("ultimately periodic word needs a nonempty period");
  int total = static_cast<int>(w.prefix.size() + w.period.size());
  WordProduct prod{total, total - 1, static_cast<int>(w.prefix.size()), &a, &w};

  // Reachable product nodes.
  std::map<int, int> id_of;  // encoded -> dense id
  std::vector<std::pair<int, int>> nodes;
  std::vector<std::vector<int>> adj;
  std::vector<int> stack;
  auto intern = [&](int q, int pos) {
    int code = prod.encode(q, pos);
    auto it = id_of.find(code);
    if (it != id_of.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    id_of.emplace(code, id);
    nodes.emplace_back(q, pos);
    adj.emplace_back();
    stack.push_back(id);
    return id;
  };
  intern(a.initial, 0);
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    auto [q, pos] = nodes[static_cast<std::size_t>(id)];
    for (int q2 : a.successors(q, prod.letter_at(pos))) {
      int target = intern(q2, prod.next_pos(pos));
      adj[static_cast<std::size_t>(id)].push_back(target);
    }
  }

  // Accepted iff for some even p there is a reachable nontrivial SCC inside
  // the priority<=p subgraph containing priority exactly p.  All nodes here
  // are reachable by construction.
  int n = static_cast<int>(nodes.size());
  auto node_prio = [&](int i) {
    return a.priority[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)].first)];
  };
  for (int p = a.rank() - a.rank() % 2; p >= 0; p -= 2) {
    std::vector<std::vector<int>> filtered(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (node_prio(i) > p) continue;
      for (int w2 : adj[static_cast<std::size_t>(i)])
        if (node_prio(w2) <= p) filtered[static_cast<std::size_t>(i)].push_back(w2);
    }
    internal::SccResult comps = internal::strongly_connected_components(filtered);
    std::vector<bool> cyclic = internal::cyclic_components(filtered, comps);
    for (int i = 0; i < n; ++i)
      if (node_prio(i) == p &&
          cyclic[static_cast<std::size_t>(comps.comp[static_cast<std::size_t>(i)])])
        return true;
  }
  return false;
}

bool resolver_run_accepts(const WordAutomaton& a, const UPWord& w) {
  if (!a.resolver) throw MusatError("no resolver attached");
  if (w.period.empty()) throw MusatError("ultimately periodic word needs a nonempty period");
  const Resolver& r = *a.resolver;

  int total = static_cast<int>(w.prefix.size() + w.period.size());
  auto letter_at = [&](int pos) {
    int ul = static_cast<int>(w.prefix.size());
    return pos < ul ? w.prefix[static_cast<std::size_t>(pos)]
                    : w.period[static_cast<std::size_t>(pos - ul)];
  };

  // Run until (state, position-in-period, memory) repeats; the maximal
  // priority on the loop decides.
  int state = a.initial, memory = r.initial_memory(), pos = 0;
  std::map<std::tuple<int, int, int>, int> seen;  // -> step index
  std::vector<int> prios;
  for (int step = 0;; ++step) {
    if (pos >= static_cast<int>(w.prefix.size())) {
      auto key = std::make_tuple(state, pos, memory);
      auto it = seen.find(key);
      if (it != seen.end()) {
        int max_loop = 0;
        for (std::size_t i = static_cast<std::size_t>(it->second); i < prios.size(); ++i)
          max_loop = std::max(max_loop, prios[i]);
        return max_loop % 2 == 0;
      }
      seen.emplace(key, step);
    }
    prios.push_back(a.priority[static_cast<std::size_t>(state)]);
    int letter = letter_at(pos);
    auto [next_state, next_memory] = r.choose(memory, state, letter);
    const auto& cell = a.successors(state, letter);
    if (!std::binary_search(cell.begin(), cell.end(), next_state))
      throw MusatError("resolver chose a successor outside delta");
    state = next_state;
    memory = next_memory;
    pos = pos == total - 1 ? static_cast<int>(w.prefix.size()) : pos + 1;
  }
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> any_letter_graph(const WordAutomaton& a) {
  std::vector<std::vector<int>> g(static_cast<std::size_t>(a.state_count()));
  for (int q = 0; q < a.state_count(); ++q) {
    std::vector<int>& out = g[static_cast<std::size_t>(q)];
    for (int l = 0; l < a.letter_count(); ++l)
      for (int w : a.successors(q, l)) out.push_back(w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return g;
}

// Simple cycles of length >= 2 through q inside the accepting subgraph.
int count_accepting_cycles_through(const WordAutomaton& a,
                                   const std::vector<std::vector<int>>& g, int q,
                                   int limit) {
  int found = 0;
  std::vector<bool> visited(g.size(), false);
  std::function<void(int)> dfs = [&](int v) {
    if (found >= limit) return;
    for (int w : g[static_cast<std::size_t>(v)]) {
      if (!a.accepting_state(w)) continue;
      if (w == q) {
        if (v != q) ++found;  // ignore the pure self-loop
        if (found >= limit) return;
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

WordClass classify_word(const WordAutomaton& a) {
  WordClass c;
  std::vector<std::vector<int>> g = any_letter_graph(a);
  std::vector<int> comp = internal::strongly_connected_components(g).comp;

  // Classification is a language-level property; states that cannot be
  // reached from the initial state are ignored.
  std::vector<bool> reachable(static_cast<std::size_t>(a.state_count()), false);
  {
    std::vector<int> stack{a.initial};
    reachable[static_cast<std::size_t>(a.initial)] = true;
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (int w : g[static_cast<std::size_t>(q)])
        if (!reachable[static_cast<std::size_t>(w)]) {
          reachable[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
    }
  }

  c.weak = true;
  std::map<int, int> comp_prio;
  for (int q = 0; q < a.state_count(); ++q) {
    if (!reachable[static_cast<std::size_t>(q)]) continue;
    auto [it, fresh] = comp_prio.emplace(comp[static_cast<std::size_t>(q)],
                                         a.priority[static_cast<std::size_t>(q)]);
    if (!fresh && it->second != a.priority[static_cast<std::size_t>(q)]) {
      c.weak = false;
      break;
    }
  }

  c.limit_linear = false;
  if (a.flavor == AcceptanceFlavor::CoBuchi) {
    c.limit_linear = true;
    // F-internal reachability, used to tell synchronizing self-loops apart
    // from ambiguous ones.
    int n = a.state_count();
    std::vector<std::vector<bool>> freach(static_cast<std::size_t>(n),
                                          std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int q = 0; q < n; ++q) {
      if (!a.accepting_state(q)) continue;
      std::vector<int> stack{q};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g[static_cast<std::size_t>(v)]) {
          if (!a.accepting_state(w)) continue;
          auto sw = static_cast<std::size_t>(w);
          if (!freach[static_cast<std::size_t>(q)][sw]) {
            freach[static_cast<std::size_t>(q)][sw] = true;
            stack.push_back(w);
          }
        }
      }
    }
    for (int q : a.accepting_states()) {
      if (!reachable[static_cast<std::size_t>(q)]) continue;
      int cycles = count_accepting_cycles_through(a, g, q, 2);
      bool self_loop = false;
      for (int l = 0; l < a.letter_count() && !self_loop; ++l) {
        const std::vector<int>& cell = a.successors(q, l);
        self_loop = std::binary_search(cell.begin(), cell.end(), q);
      }
      // Exactly one proper cycle, or none at all: a cycle-free accepting
      // state without a self-loop cannot host an accepting tail and needs
      // no looping machinery.  A self-loop with no proper cycle is a loop
      // of its own and outside the token discipline.
      if (cycles > 1 || (cycles == 0 && self_loop)) {
        c.limit_linear = false;
        break;
      }
      // A self-loop is tolerated as a synchronizing transition only when the
      // letter does not simultaneously advance along the cycle; a token
      // could not decide between staying and stepping otherwise.
      for (int l = 0; l < a.letter_count() && c.limit_linear; ++l) {
        const std::vector<int>& cell = a.successors(q, l);
        if (!std::binary_search(cell.begin(), cell.end(), q)) continue;
        for (int w : cell)
          if (w != q && a.accepting_state(w) &&
              freach[static_cast<std::size_t>(w)][static_cast<std::size_t>(q)])
            c.limit_linear = false;
      }
    }
  }

  // Compartment of q: states reachable from q along states of priority
  // <= priority(q).  Internal determinism of every even compartment.
  c.limit_deterministic = true;
  for (int q = 0; q < a.state_count() && c.limit_deterministic; ++q) {
    if (!reachable[static_cast<std::size_t>(q)]) continue;
    int p = a.priority[static_cast<std::size_t>(q)];
    if (p % 2 != 0) continue;
    std::vector<bool> in_comp(static_cast<std::size_t>(a.state_count()), false);
    std::vector<int> stack{q};
    in_comp[static_cast<std::size_t>(q)] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g[static_cast<std::size_t>(v)]) {
        auto sw = static_cast<std::size_t>(w);
        if (!in_comp[sw] && a.priority[sw] <= p) {
          in_comp[sw] = true;
          stack.push_back(w);
        }
      }
    }
    for (int v = 0; v < a.state_count() && c.limit_deterministic; ++v) {
      if (!in_comp[static_cast<std::size_t>(v)]) continue;
      for (int l = 0; l < a.letter_count(); ++l) {
        int inside = 0;
        for (int w : a.successors(v, l))
          if (in_comp[static_cast<std::size_t>(w)]) ++inside;
        if (inside > 1) { c.limit_deterministic = false; break; }
      }
    }
  }
  return c;
}

WordAutomaton weak_to_cobuchi(const WordAutomaton& a) {
  WordClass c = classify_word(a);
  if (!c.weak) throw MusatError("weak_to_cobuchi requires a weak automaton");
  WordAutomaton out = a;
  out.flavor = AcceptanceFlavor::CoBuchi;
  for (int q = 0; q < out.state_count(); ++q) {
    int p = a.priority[static_cast<std::size_t>(q)];
    if (p != 1 && p != 2)
      throw MusatError("weak_to_cobuchi expects priorities {1,2}");
    out.priority[static_cast<std::size_t>(q)] = (p == 2) ? 0 : 1;
  }
  out.check_flavor();
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string word_automaton_to_dot(const WordAutomaton& a) {
  std::ostringstream os;
  os << "digraph word_automaton {\n  rankdir=LR;\n";
  for (int q = 0; q < a.state_count(); ++q) {
    os << "  q" << q << " [label=\"" << a.state_names[static_cast<std::size_t>(q)]
       << " / " << a.priority[static_cast<std::size_t>(q)] << "\"";
    if (a.accepting_state(q) && a.flavor != AcceptanceFlavor::Parity)
      os << ", shape=doublecircle";
    if (q == a.initial) os << ", penwidth=2";
    os << "];\n";
  }
  for (int q = 0; q < a.state_count(); ++q)
    for (int l = 0; l < a.letter_count(); ++l)
      for (int w : a.successors(q, l))
        os << "  q" << q << " -> q" << w << " [label=\""
           << a.letter_names[static_cast<std::size_t>(l)] << "\"];\n";
  os << "}\n";
  return os.str();
}

namespace {
const char* flavor_str(AcceptanceFlavor f) {
  switch (f) {
    case AcceptanceFlavor::Parity: return "parity";
    case AcceptanceFlavor::Buchi: return "buchi";
    case AcceptanceFlavor::CoBuchi: return "cobuchi";
  }
  return "?";
}
}  // namespace

std::string word_automaton_to_json(const WordAutomaton& a) {
  nlohmann::json j;
  j["flavor"] = flavor_str(a.flavor);
  j["alphabet"] = a.letter_names;
  j["initial"] = a.initial;
  j["states"] = nlohmann::json::array();
  for (int q = 0; q < a.state_count(); ++q) {
    nlohmann::json js;
    js["id"] = q;
    js["name"] = a.state_names[static_cast<std::size_t>(q)];
    js["priority"] = a.priority[static_cast<std::size_t>(q)];
    j["states"].push_back(js);
  }
  j["edges"] = nlohmann::json::array();
  for (int q = 0; q < a.state_count(); ++q)
    for (int l = 0; l < a.letter_count(); ++l)
      for (int w : a.successors(q, l))
        j["edges"].push_back({q, a.letter_names[static_cast<std::size_t>(l)], w});
  return j.dump(2);
}

WordAutomaton word_automaton_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  WordAutomaton a;
  std::string fl = j.value("flavor", "parity");
  if (fl == "buchi") a.flavor = AcceptanceFlavor::Buchi;
  else if (fl == "cobuchi") a.flavor = AcceptanceFlavor::CoBuchi;
  else a.flavor = AcceptanceFlavor::Parity;
  for (auto& l : j.at("alphabet")) a.letter_names.push_back(l.get<std::string>());
  for (auto& js : j.at("states"))
    a.add_state(js.at("priority").get<int>(), js.value("name", ""));
  a.initial = j.value("initial", 0);
  std::map<std::string, int> letter_id;
  for (int l = 0; l < a.letter_count(); ++l)
    letter_id[a.letter_names[static_cast<std::size_t>(l)]] = l;
  for (auto& je : j.at("edges")) {
    int from = je[0].get<int>();
    int letter = letter_id.at(je[1].get<std::string>());
    int to = je[2].get<int>();
    a.add_edge(from, letter, to);
  }
  a.check_flavor();
  return a;
}

std::vector<UPWordVector> upword_vectors_from_json(const std::string& text,
                                                   const WordAutomaton& a) {
  std::map<std::string, int> letter_id;
  for (int l = 0; l < a.letter_count(); ++l)
    letter_id[a.letter_names[static_cast<std::size_t>(l)]] = l;
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<UPWordVector> out;
  for (auto& jv : j) {
    UPWordVector v;
    for (auto& l : jv.at("u")) v.word.prefix.push_back(letter_id.at(l.get<std::string>()));
    for (auto& l : jv.at("v")) v.word.period.push_back(letter_id.at(l.get<std::string>()));
    v.expected = jv.at("expected").get<bool>();
    out.push_back(std::move(v));
  }
  return out;
}

std::string upword_vectors_to_json(const std::vector<UPWordVector>& vecs,
                                   const WordAutomaton& a) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& v : vecs) {
    nlohmann::json jv;
    jv["u"] = nlohmann::json::array();
    for (int l : v.word.prefix) jv["u"].push_back(a.letter_names[static_cast<std::size_t>(l)]);
    jv["v"] = nlohmann::json::array();
    for (int l : v.word.period) jv["v"].push_back(a.letter_names[static_cast<std::size_t>(l)]);
    jv["expected"] = v.expected;
    j.push_back(jv);
  }
  return j.dump(2);
}

}  // namespace musat
