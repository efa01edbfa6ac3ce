#include "musat/determinization.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace musat {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSat / b) return kSat;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

// Sorted-vector sets of state ids.
using Set = std::vector<int>;

Set image(const WordAutomaton& a, const Set& u, int letter) {
  Set out;
  for (int q : u)
    for (int w : a.successors(q, letter)) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool set_contains(const Set& u, int q) {
  return std::binary_search(u.begin(), u.end(), q);
}

std::string set_name(const WordAutomaton& a, const Set& u) {
  std::string s = "{";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ",";
    s += a.state_names[static_cast<std::size_t>(u[i])];
  }
  return s + "}";
}

void check_size(std::uint64_t actual, std::uint64_t bound, const char* what) {
  if (actual > bound)
    throw MusatError(std::string(what) + ": construction exceeded its size bound");
}

}  // namespace

std::uint64_t bound_parity_to_buchi(int n, int rank) {
  std::uint64_t copies = static_cast<std::uint64_t>((rank + 1 + 1) / 2) + 1;
  return sat_mul(copies, static_cast<std::uint64_t>(n));
}
std::uint64_t bound_circle(int n) {
  return sat_mul(sat_mul(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(n)),
                 sat_pow(2, n));
}
std::uint64_t bound_miyano_hayashi(int n) { return sat_pow(3, n); }
std::uint64_t bound_focus(int n, int accepting) {
  return sat_mul(static_cast<std::uint64_t>(accepting) + 1, sat_pow(2, n));
}
std::uint64_t bound_permutation(int n) {
  long double b = std::ceil(std::exp(1.0L) * std::tgammal(static_cast<long double>(n) + 2));
  if (b > static_cast<long double>(kSat)) return kSat;
  return static_cast<std::uint64_t>(b);
}

// ---------------------------------------------------------------------------
// Parity -> Buchi
// ---------------------------------------------------------------------------

WordAutomaton parity_to_buchi(const WordAutomaton& a) {
  int k = a.rank();
  WordAutomaton out;
  out.flavor = AcceptanceFlavor::Buchi;
  out.letter_names = a.letter_names;

  // States are originals q (encoded (q, -1)) and copies (q, i) for even i.
  std::map<std::pair<int, int>, int> id_of;
  std::deque<std::pair<int, int>> work;
  auto intern = [&](int q, int i) {
    auto key = std::make_pair(q, i);
    auto it = id_of.find(key);
    if (it != id_of.end()) return it->second;
    bool accepting = i >= 0 && a.priority[static_cast<std::size_t>(q)] == i;
    std::string name = a.state_names[static_cast<std::size_t>(q)];
    if (i >= 0) name += "@" + std::to_string(i);
    int id = out.add_state(accepting ? 2 : 1, name);
    id_of.emplace(key, id);
    work.emplace_back(q, i);
    return id;
  };
  out.initial = intern(a.initial, -1);
  while (!work.empty()) {
    auto [q, i] = work.front();
    work.pop_front();
    int from = id_of.at({q, i});
    for (int letter = 0; letter < a.letter_count(); ++letter) {
      for (int q2 : a.successors(q, letter)) {
        int p2 = a.priority[static_cast<std::size_t>(q2)];
        if (i < 0) {
          out.add_edge(from, letter, intern(q2, -1));
          if (p2 % 2 == 0 && p2 <= k) out.add_edge(from, letter, intern(q2, p2));
        } else if (p2 <= i) {
          out.add_edge(from, letter, intern(q2, i));
        }
      }
    }
  }
  check_size(out.state_count(),
             bound_parity_to_buchi(a.state_count(), k), "parity_to_buchi");
  out.check_flavor();
  return out;
}

WordAutomaton prune_rejecting_buchi(const WordAutomaton& a) {
  if (a.flavor != AcceptanceFlavor::Buchi)
    throw MusatError("pruning expects a Buchi automaton");
  // Backward closure from the accepting states.
  std::vector<bool> can_accept(static_cast<std::size_t>(a.state_count()), false);
  std::vector<std::vector<int>> pred(static_cast<std::size_t>(a.state_count()));
  for (int q = 0; q < a.state_count(); ++q)
    for (int letter = 0; letter < a.letter_count(); ++letter)
      for (int w : a.successors(q, letter)) pred[static_cast<std::size_t>(w)].push_back(q);
  std::vector<int> stack;
  for (int q : a.accepting_states()) {
    can_accept[static_cast<std::size_t>(q)] = true;
    stack.push_back(q);
  }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int u : pred[static_cast<std::size_t>(q)])
      if (!can_accept[static_cast<std::size_t>(u)]) {
        can_accept[static_cast<std::size_t>(u)] = true;
        stack.push_back(u);
      }
  }

  // Keep the initial state alive even when the language is empty.
  WordAutomaton out;
  out.flavor = AcceptanceFlavor::Buchi;
  out.letter_names = a.letter_names;
  std::vector<int> remap(static_cast<std::size_t>(a.state_count()), -1);
  for (int q = 0; q < a.state_count(); ++q)
    if (can_accept[static_cast<std::size_t>(q)] || q == a.initial)
      remap[static_cast<std::size_t>(q)] =
          out.add_state(a.priority[static_cast<std::size_t>(q)],
                        a.state_names[static_cast<std::size_t>(q)]);
  out.initial = remap[static_cast<std::size_t>(a.initial)];
  for (int q = 0; q < a.state_count(); ++q) {
    if (remap[static_cast<std::size_t>(q)] < 0) continue;
    for (int letter = 0; letter < a.letter_count(); ++letter)
      for (int w : a.successors(q, letter))
        if (can_accept[static_cast<std::size_t>(w)])
          out.add_edge(remap[static_cast<std::size_t>(q)], letter,
                       remap[static_cast<std::size_t>(w)]);
  }
  out.check_flavor();
  return out;
}

// ---------------------------------------------------------------------------
// Circle method
// ---------------------------------------------------------------------------

namespace {

// The unique cycle (length >= 2) through q in the accepting subgraph,
// returned as the ordered node list starting at q; empty if none exists.
std::vector<int> accepting_cycle_through(const WordAutomaton& a,
                                         const std::vector<std::vector<int>>& acc_graph,
                                         int q) {
  std::vector<int> path{q};
  std::vector<bool> visited(static_cast<std::size_t>(a.state_count()), false);
  std::vector<int> found;
  std::function<void(int)> dfs = [&](int v) {
    for (int w : acc_graph[static_cast<std::size_t>(v)]) {
      if (w == q) {
        if (v != q && found.empty()) found = path;
        continue;
      }
      if (!visited[static_cast<std::size_t>(w)]) {
        visited[static_cast<std::size_t>(w)] = true;
        path.push_back(w);
        dfs(w);
        path.pop_back();
        visited[static_cast<std::size_t>(w)] = false;
      }
    }
  };
  dfs(q);
  return found;
}

}  // namespace

WordAutomaton circle_determinize(const WordAutomaton& a) {
  if (a.flavor != AcceptanceFlavor::CoBuchi)
    throw MusatError("circle method expects a co-Buchi automaton");
  WordClass cls = classify_word(a);
  if (!cls.limit_linear) throw MusatError("circle method: input not limit-linear");

  std::vector<int> accepting = a.accepting_states();
  if (static_cast<int>(accepting.size()) == a.state_count() && a.deterministic())
    return a;

  // Restrict the cycle structure to states reachable from the initial one
  // (unreachable accepting states need no token machinery).
  std::vector<bool> reachable(static_cast<std::size_t>(a.state_count()), false);
  {
    std::vector<int> stack{a.initial};
    reachable[static_cast<std::size_t>(a.initial)] = true;
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (int l = 0; l < a.letter_count(); ++l)
        for (int w : a.successors(q, l))
          if (!reachable[static_cast<std::size_t>(w)]) {
            reachable[static_cast<std::size_t>(w)] = true;
            stack.push_back(w);
          }
    }
  }
  std::vector<int> live_accepting;
  for (int q : accepting)
    if (reachable[static_cast<std::size_t>(q)]) live_accepting.push_back(q);

  // Edges of the accepting subgraph, self-loops removed; each accepting
  // state lies on exactly one remaining cycle.
  std::vector<std::vector<int>> acc_graph(static_cast<std::size_t>(a.state_count()));
  for (int q : live_accepting)
    for (int l = 0; l < a.letter_count(); ++l)
      for (int w : a.successors(q, l))
        if (w != q && a.accepting_state(w))
          acc_graph[static_cast<std::size_t>(q)].push_back(w);

  std::vector<int> cycle_succ(static_cast<std::size_t>(a.state_count()), -1);
  std::vector<int> cycle_id(static_cast<std::size_t>(a.state_count()), -1);
  std::vector<int> cycle_reps;
  for (int q : live_accepting) {
    if (cycle_id[static_cast<std::size_t>(q)] != -1) continue;
    std::vector<int> cyc = accepting_cycle_through(a, acc_graph, q);
    if (cyc.empty()) continue;  // transient accepting state, no tail possible
    int id = static_cast<int>(cycle_reps.size());
    cycle_reps.push_back(*std::min_element(cyc.begin(), cyc.end()));
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      cycle_id[static_cast<std::size_t>(cyc[i])] = id;
      cycle_succ[static_cast<std::size_t>(cyc[i])] = cyc[(i + 1) % cyc.size()];
    }
  }

  if (cycle_reps.empty()) {
    // No accepting cycles at all: the language is empty, which the plain
    // powerset automaton with everything rejecting realizes in the same
    // state shape.
    WordAutomaton empty;
    empty.flavor = AcceptanceFlavor::CoBuchi;
    empty.letter_names = a.letter_names;
    std::map<Set, int> ids;
    std::deque<Set> todo;
    auto get = [&](Set u) {
      auto it = ids.find(u);
      if (it != ids.end()) return it->second;
      int id = empty.add_state(1, set_name(a, u) + "," +
                                      a.state_names[static_cast<std::size_t>(a.initial)] + ",0");
      ids.emplace(u, id);
      todo.push_back(std::move(u));
      return id;
    };
    empty.initial = get(Set{a.initial});
    while (!todo.empty()) {
      Set u = todo.front();
      todo.pop_front();
      int from = ids.at(u);
      for (int letter = 0; letter < a.letter_count(); ++letter) {
        int to = get(image(a, u, letter));
        empty.add_edge(from, letter, to);
      }
    }
    check_size(empty.state_count(), bound_circle(a.state_count()), "circle_determinize");
    return empty;
  }

  int fsize = static_cast<int>(accepting.size());
  int ncycles = static_cast<int>(cycle_reps.size());
  // Fair rotation over the accepting cycles.
  auto next_token = [&](int q) {
    if (ncycles == 0) return a.initial;
    int c = cycle_id[static_cast<std::size_t>(q)];
    if (c < 0) return cycle_reps[0];
    return cycle_reps[static_cast<std::size_t>((c + 1) % ncycles)];
  };

  WordAutomaton out;
  out.flavor = AcceptanceFlavor::CoBuchi;
  out.letter_names = a.letter_names;

  struct Macro { Set u; int token; int counter; };
  std::map<std::tuple<Set, int, int>, int> id_of;
  std::deque<Macro> work;
  auto intern = [&](Set u, int token, int counter) {
    auto key = std::make_tuple(u, token, counter);
    auto it = id_of.find(key);
    if (it != id_of.end()) return it->second;
    std::ostringstream name;
    name << set_name(a, u) << "," << a.state_names[static_cast<std::size_t>(token)]
         << "," << counter;
    int id = out.add_state(counter != 0 ? 0 : 1, name.str());
    id_of.emplace(key, id);
    work.push_back(Macro{std::move(u), token, counter});
    return id;
  };

  intern(Set{a.initial}, a.initial, 0);
  while (!work.empty()) {
    Macro m = work.front();
    work.pop_front();
    int from = id_of.at({m.u, m.token, m.counter});
    for (int letter = 0; letter < a.letter_count(); ++letter) {
      Set u2 = image(a, m.u, letter);
      int token = -1, counter = -1;

      // The token shadows one candidate run inside its cycle.  Within the
      // cycle the step on a letter is unique: the synchronizing self-loop
      // (stay), the cycle edge (advance), or nothing (the candidate dies).
      int in_cycle_step = -1;
      if (m.counter != 0 && set_contains(m.u, m.token)) {
        const auto& succ = a.successors(m.token, letter);
        int c_id = cycle_id[static_cast<std::size_t>(m.token)];
        if (c_id >= 0) {
          if (std::binary_search(succ.begin(), succ.end(), m.token))
            in_cycle_step = m.token;
          else if (cycle_succ[static_cast<std::size_t>(m.token)] >= 0 &&
                   std::binary_search(succ.begin(), succ.end(),
                                      cycle_succ[static_cast<std::size_t>(m.token)]))
            in_cycle_step = cycle_succ[static_cast<std::size_t>(m.token)];
        }
      }

      if (in_cycle_step >= 0) {
        token = in_cycle_step;
        counter = m.counter;
      } else if (m.counter == 0) {
        // All retries burned: rotate fairly to the next accepting cycle.
        token = next_token(m.token);
        counter = fsize;
      } else {
        // The candidate died.  Pursue the first state of the same cycle
        // that still hosts a run, scanning cyclically from the death phase
        // itself (a surviving run may have just moved into it); candidates
        // ahead never get skipped, so the pointer closes in on any run that
        // stays in the cycle.
        counter = m.counter - 1;
        token = m.token;
        int c_id = cycle_id[static_cast<std::size_t>(m.token)];
        if (c_id >= 0) {
          token = cycle_succ[static_cast<std::size_t>(m.token)];
          int probe = m.token;
          for (int steps = 0; steps < fsize + 1 && probe >= 0; ++steps) {
            if (set_contains(u2, probe)) { token = probe; break; }
            probe = cycle_succ[static_cast<std::size_t>(probe)];
          }
        }
      }
      out.add_edge(from, letter, intern(std::move(u2), token, counter));
    }
  }
  // The n^2 * 2^n bound presumes |F| < n; otherwise the identity case above
  // applies to deterministic inputs and no bound is claimed.
  if (fsize < a.state_count())
    check_size(out.state_count(), bound_circle(a.state_count()), "circle_determinize");
  if (!out.deterministic()) throw MusatError("circle method: output not deterministic");
  out.check_flavor();
  return out;
}

// ---------------------------------------------------------------------------
// Miyano-Hayashi
// ---------------------------------------------------------------------------

WordAutomaton miyano_hayashi(const WordAutomaton& a) {
  if (a.flavor != AcceptanceFlavor::CoBuchi)
    throw MusatError("breakpoint construction expects a co-Buchi automaton");

  WordAutomaton out;
  out.flavor = AcceptanceFlavor::CoBuchi;
  out.letter_names = a.letter_names;

  std::map<std::pair<Set, Set>, int> id_of;
  std::deque<std::pair<Set, Set>> work;
  auto intern = [&](Set u, Set v) {
    auto key = std::make_pair(u, v);
    auto it = id_of.find(key);
    if (it != id_of.end()) return it->second;
    int id = out.add_state(v.empty() ? 1 : 0, set_name(a, u) + "," + set_name(a, v));
    id_of.emplace(key, id);
    work.emplace_back(std::move(u), std::move(v));
    return id;
  };

  intern(Set{a.initial}, Set{});
  while (!work.empty()) {
    auto [u, v] = work.front();
    work.pop_front();
    int from = id_of.at({u, v});
    for (int letter = 0; letter < a.letter_count(); ++letter) {
      Set u2 = image(a, u, letter);
      Set v2 = image(a, v.empty() ? u : v, letter);
      Set v2f;
      for (int q : v2)
        if (a.accepting_state(q)) v2f.push_back(q);
      out.add_edge(from, letter, intern(std::move(u2), std::move(v2f)));
    }
  }
  check_size(out.state_count(), bound_miyano_hayashi(a.state_count()), "miyano_hayashi");
  if (!out.deterministic()) throw MusatError("breakpoint construction: output not deterministic");
  out.check_flavor();
  return out;
}

// ---------------------------------------------------------------------------
// Permutation method
// ---------------------------------------------------------------------------

PermutationResult permutation_determinize_full(const WordAutomaton& input) {
  if (input.flavor != AcceptanceFlavor::Buchi)
    throw MusatError("permutation method expects a Buchi automaton");
  if (!classify_word(input).limit_deterministic)
    throw MusatError("permutation method: input not limit-deterministic");

  // Deterministic part: states reachable from the accepting set.
  WordAutomaton a = input;
  auto compute_qd = [&](const WordAutomaton& w) {
    std::vector<bool> qd(static_cast<std::size_t>(w.state_count()), false);
    std::vector<int> stack;
    for (int q : w.accepting_states())
      if (!qd[static_cast<std::size_t>(q)]) { qd[static_cast<std::size_t>(q)] = true; stack.push_back(q); }
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (int l = 0; l < w.letter_count(); ++l)
        for (int s : w.successors(q, l))
          if (!qd[static_cast<std::size_t>(s)]) { qd[static_cast<std::size_t>(s)] = true; stack.push_back(s); }
    }
    return qd;
  };
  std::vector<bool> in_qd = compute_qd(a);
  if (in_qd[static_cast<std::size_t>(a.initial)]) {
    // Fresh nondeterministic copy of the initial state.
    int copy = a.add_state(1, a.state_names[static_cast<std::size_t>(a.initial)] + "'");
    for (int l = 0; l < a.letter_count(); ++l)
      for (int s : a.successors(a.initial, l)) a.add_edge(copy, l, s);
    a.initial = copy;
    in_qd = compute_qd(a);
  }
  for (int q = 0; q < a.state_count(); ++q)
    if (in_qd[static_cast<std::size_t>(q)])
      for (int l = 0; l < a.letter_count(); ++l)
        if (a.successors(q, l).size() > 1)
          throw MusatError("permutation method: deterministic part is not deterministic");
  int qd_size = static_cast<int>(std::count(in_qd.begin(), in_qd.end(), true));

  PermutationResult res;
  WordAutomaton& out = res.automaton;
  out.flavor = AcceptanceFlavor::Parity;
  out.letter_names = a.letter_names;

  using Perm = std::vector<int>;
  std::map<std::tuple<Set, Perm, int>, int> id_of;
  std::map<std::pair<Set, Perm>, int> macro_seen;
  std::deque<std::tuple<Set, Perm, int>> work;
  auto intern = [&](Set u, Perm f, int p) {
    auto key = std::make_tuple(u, f, p);
    auto it = id_of.find(key);
    if (it != id_of.end()) return it->second;
    std::ostringstream name;
    name << set_name(a, u) << ",[";
    for (std::size_t i = 0; i < f.size(); ++i)
      name << (i ? "," : "") << a.state_names[static_cast<std::size_t>(f[i])];
    name << "]," << p;
    int id = out.add_state(p, name.str());
    id_of.emplace(key, id);
    macro_seen.emplace(std::make_pair(u, f), 0);
    work.emplace_back(std::move(u), std::move(f), p);
    return id;
  };

  intern(Set{a.initial}, Perm{}, 1);
  while (!work.empty()) {
    auto [u, f, p] = work.front();
    work.pop_front();
    int from = id_of.at({u, f, p});
    for (int letter = 0; letter < a.letter_count(); ++letter) {
      Set all = image(a, u, letter);
      Set u2;
      for (int q : all)
        if (!in_qd[static_cast<std::size_t>(q)]) u2.push_back(q);

      // Step the permutation; older positions absorb younger runs that
      // merge into the same state.
      Perm f2;
      std::vector<int> step(f.size(), -1);  // target of position i, -1 = died
      for (std::size_t i = 0; i < f.size(); ++i) {
        const auto& succ = a.successors(f[i], letter);
        if (succ.empty()) continue;
        step[i] = succ[0];
        if (std::find(f2.begin(), f2.end(), succ[0]) == f2.end()) f2.push_back(succ[0]);
      }
      for (int q : all)
        if (in_qd[static_cast<std::size_t>(q)] &&
            std::find(f2.begin(), f2.end(), q) == f2.end())
          f2.push_back(q);

      // Leftmost position that ends (its run died or merged away) or is
      // active (its run continued in place into an accepting state).
      int p2 = 1;
      for (std::size_t i = 0; i < f.size(); ++i) {
        bool ending = step[i] == -1 || i >= f2.size() || f2[i] != step[i];
        bool active = !ending && a.accepting_state(f2[i]);
        if (ending) { p2 = 2 * (qd_size - static_cast<int>(i) - 1) + 3; break; }
        if (active) { p2 = 2 * (qd_size - static_cast<int>(i) - 1) + 2; break; }
      }
      out.add_edge(from, letter, intern(std::move(u2), std::move(f2), p2));
    }
  }

  res.macro_states = static_cast<int>(macro_seen.size());
  res.deterministic_part = qd_size;
  check_size(static_cast<std::uint64_t>(res.macro_states),
             bound_permutation(a.state_count()), "permutation_determinize");
  if (out.rank() > 2 * qd_size + 1)
    throw MusatError("permutation method: priority range exceeded");
  if (!out.deterministic())
    throw MusatError("permutation method: output not deterministic");
  return res;
}

WordAutomaton permutation_determinize(const WordAutomaton& a) {
  return permutation_determinize_full(a).automaton;
}

// ---------------------------------------------------------------------------
// Focus method
// ---------------------------------------------------------------------------

namespace {

// Resolver memory is a seniority list of the accepting members of the
// current macro-state, longest continuous accepting residence first.  The
// list is stepped deterministically (limit determinism makes the accepting
// successor of an accepting state unique) with new entrants appended in
// state order, so refocusing prefers the oldest surviving run.
class FocusResolver : public Resolver {
 public:
  struct StateInfo { Set u; int focus; };  // focus = -1 for unfocused

  FocusResolver(WordAutomaton base, std::vector<StateInfo> states,
                std::map<std::pair<Set, int>, int> lookup)
      : base_(std::move(base)), states_(std::move(states)), lookup_(std::move(lookup)) {
    std::vector<int> first;
    if (base_.accepting_state(base_.initial)) first.push_back(base_.initial);
    intern_list(first);
  }

  int initial_memory() const override { return 0; }

  std::pair<int, int> choose(int memory, int state, int letter) const override {
    std::lock_guard<std::mutex> lock(mu_);
    const std::vector<int>& age = lists_[static_cast<std::size_t>(memory)];
    const StateInfo& info = states_[static_cast<std::size_t>(state)];

    // Age list update mirrors the permutation step.
    std::vector<int> age2;
    for (int q : age) {
      int next = accepting_successor(q, letter);
      if (next >= 0 && std::find(age2.begin(), age2.end(), next) == age2.end())
        age2.push_back(next);
    }
    Set u2 = image(base_, info.u, letter);
    for (int q : u2)
      if (base_.accepting_state(q) &&
          std::find(age2.begin(), age2.end(), q) == age2.end())
        age2.push_back(q);
    int next_memory = intern_list(age2);

    int target;
    if (info.focus >= 0) {
      int next = accepting_successor(info.focus, letter);
      target = lookup_.at({u2, next >= 0 ? next : -1});
    } else {
      int pick = -1;
      for (int q : age2) { pick = q; break; }  // oldest surviving accepting run
      target = lookup_.at({u2, pick});
    }
    return {target, next_memory};
  }

 private:
  int accepting_successor(int q, int letter) const {
    for (int w : base_.successors(q, letter))
      if (base_.accepting_state(w)) return w;
    return -1;
  }

  int intern_list(const std::vector<int>& l) const {
    auto it = list_ids_.find(l);
    if (it != list_ids_.end()) return it->second;
    int id = static_cast<int>(lists_.size());
    lists_.push_back(l);
    list_ids_.emplace(l, id);
    return id;
  }

  WordAutomaton base_;
  std::vector<StateInfo> states_;
  std::map<std::pair<Set, int>, int> lookup_;
  mutable std::mutex mu_;
  mutable std::vector<std::vector<int>> lists_;
  mutable std::map<std::vector<int>, int> list_ids_;
};

}  // namespace

WordAutomaton focus_history_determinize(const WordAutomaton& a) {
  if (a.flavor != AcceptanceFlavor::CoBuchi)
    throw MusatError("focus method expects a co-Buchi automaton");
  if (!classify_word(a).limit_deterministic)
    throw MusatError("focus method: input not limit-deterministic");

  WordAutomaton out;
  out.flavor = AcceptanceFlavor::CoBuchi;
  out.letter_names = a.letter_names;

  std::map<std::pair<Set, int>, int> id_of;  // (U, focus or -1) -> state
  std::vector<FocusResolver::StateInfo> decode;
  std::deque<std::pair<Set, int>> work;
  auto intern = [&](Set u, int focus) {
    auto key = std::make_pair(u, focus);
    auto it = id_of.find(key);
    if (it != id_of.end()) return it->second;
    std::string name = set_name(a, u);
    if (focus >= 0) name += "@" + a.state_names[static_cast<std::size_t>(focus)];
    int id = out.add_state(focus >= 0 ? 0 : 1, name);
    id_of.emplace(key, id);
    decode.push_back({u, focus});
    work.emplace_back(std::move(u), focus);
    return id;
  };

  intern(Set{a.initial}, -1);
  while (!work.empty()) {
    auto [u, focus] = work.front();
    work.pop_front();
    int from = id_of.at({u, focus});
    for (int letter = 0; letter < a.letter_count(); ++letter) {
      Set u2 = image(a, u, letter);
      if (focus >= 0) {
        int next = -1;
        for (int w : a.successors(focus, letter))
          if (a.accepting_state(w)) { next = w; break; }
        out.add_edge(from, letter, intern(u2, next));  // next = -1 drops the focus
      } else {
        out.add_edge(from, letter, intern(u2, -1));
        for (int q : u2)
          if (a.accepting_state(q)) out.add_edge(from, letter, intern(u2, q));
      }
    }
  }

  check_size(out.state_count(),
             bound_focus(a.state_count(), static_cast<int>(a.accepting_states().size())),
             "focus_history_determinize");
  out.check_flavor();
  out.resolver = std::make_shared<FocusResolver>(a, std::move(decode), id_of);
  return out;
}

}  // namespace musat
