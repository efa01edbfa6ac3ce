#include "musat/emptiness_game.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

namespace musat {

int ParityGame::add_node(bool owner_box, int priority, std::string name) {
  nodes.push_back(Node{owner_box, priority, std::move(name)});
  succ.emplace_back();
  return static_cast<int>(nodes.size()) - 1;
}

void ParityGame::add_edge(int from, int to) {
  succ[static_cast<std::size_t>(from)].push_back(to);
}

int ParityGame::max_priority() const {
  int m = 0;
  for (const Node& n : nodes) m = std::max(m, n.priority);
  return m;
}

bool ParityGame::is_buchi() const {
  for (const Node& n : nodes)
    if (n.priority != 1 && n.priority != 2) return false;
  return true;
}

std::string parity_game_to_dot(const ParityGame& g) {
  std::ostringstream os;
  os << "digraph game {\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    os << "  n" << v << " [shape=" << (g.nodes[v].owner_box ? "box" : "diamond")
       << ", label=\"" << (g.nodes[v].name.empty() ? std::to_string(v) : g.nodes[v].name)
       << " : " << g.nodes[v].priority << "\"];\n";
  }
  for (std::size_t v = 0; v < g.size(); ++v)
    for (int w : g.succ[v]) os << "  n" << v << " -> n" << w << ";\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Arena labels
// ---------------------------------------------------------------------------

namespace {

std::string letter_string(const Apt& apt, Letter sigma) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < apt.atoms.size(); ++i) {
    if ((sigma >> i) & 1u) {
      if (!first) s += ",";
      s += std::string(Formula::symbol_text(apt.atoms[i]));
      first = false;
    }
  }
  return s + "}";
}

}  // namespace

std::string ArenaLabel::describe(const Apt& apt) const {
  std::ostringstream os;
  switch (kind) {
    case Kind::LetterChoice:
      os << "letter " << letter_string(apt, letter);
      break;
    case Kind::LocalChoice:
      os << "d(";
      for (std::size_t i = 0; i < choice.size(); ++i)
        os << (i ? " " : "") << choice[i].first << ">" << choice[i].second;
      os << ")";
      if (has_letter) os << "@" << letter_string(apt, letter);
      break;
    case Kind::ModalPick:
      os << "pick " << pick;
      if (has_letter) os << "@" << letter_string(apt, letter);
      break;
    case Kind::SerialStep:
      os << "serial";
      if (has_letter) os << "@" << letter_string(apt, letter);
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Strategy arena
// ---------------------------------------------------------------------------

namespace {

using Macro = std::vector<int>;

void sort_unique(Macro& m) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
}

bool macro_contains(const Macro& m, int q) {
  return std::binary_search(m.begin(), m.end(), q);
}

// Drops the accepting sink (a discharged obligation).
void normalize_macro(const Apt& apt, Macro& m) {
  sort_unique(m);
  m.erase(std::remove(m.begin(), m.end(), apt.top_state), m.end());
}

bool literal_clash(const Apt& apt, const Macro& m) {
  for (std::size_t i = 0; i < apt.atoms.size(); ++i) {
    bool pos = false, neg = false;
    for (int q : m) {
      const Apt::State& st = apt.states[static_cast<std::size_t>(q)];
      if (st.atom_test == static_cast<int>(i)) (st.negated ? neg : pos) = true;
    }
    if (pos && neg) return true;
  }
  return false;
}

Letter canonical_letter(const Apt& apt, const Macro& m) {
  Letter sigma = 0;
  for (int q : m) {
    const Apt::State& st = apt.states[static_cast<std::size_t>(q)];
    if (st.atom_test >= 0 && !st.negated) sigma |= Letter{1} << st.atom_test;
  }
  return sigma;
}

bool local_active_sat(const Apt& apt, int q) {
  const Apt::State& st = apt.states[static_cast<std::size_t>(q)];
  return kind_is_local(st.kind) && st.atom_test < 0 &&
         q != apt.top_state && q != apt.bot_state;
}

std::uint64_t sat_mul64(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (a == 0 || b == 0) return 0;
  if (a > kMax / b) return kMax;
  return a * b;
}

std::uint64_t sat_pow64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul64(r, base);
  return r;
}

struct ArenaBuilder {
  const Apt& apt;
  ArenaOptions options;
  StrategyArena arena;
  std::map<std::pair<Macro, int>, int> node_ids;  // (macro, letter or -1)
  std::map<std::tuple<int, Letter, bool, std::vector<std::pair<int, int>>, int>, int> label_ids;
  std::deque<int> work;

  explicit ArenaBuilder(const Apt& a, const ArenaOptions& o) : apt(a), options(o) {}

  int label_id(const ArenaLabel& l) {
    auto key = std::make_tuple(static_cast<int>(l.kind), l.has_letter ? l.letter : 0,
                               l.has_letter, l.choice, l.pick);
    auto it = label_ids.find(key);
    if (it != label_ids.end()) return it->second;
    int id = static_cast<int>(arena.labels.size());
    arena.labels.push_back(l);
    label_ids.emplace(key, id);
    return id;
  }

  int intern(Macro m, int letter /* -1 = none */) {
    auto key = std::make_pair(m, letter);
    auto it = node_ids.find(key);
    if (it != node_ids.end()) return it->second;

    StrategyArena::Node node;
    node.states = m;
    node.has_letter = letter >= 0;
    node.letter = letter >= 0 ? static_cast<Letter>(letter) : 0;
    node.dead = macro_contains(m, apt.bot_state) ||
                (options.satisfiability_mode && literal_clash(apt, m));
    if (node.dead) {
      node.owner_box = false;
    } else if (!node.has_letter) {
      node.owner_box = false;
    } else if (options.satisfiability_mode) {
      node.owner_box = true;  // local work is finished before the letter step
    } else {
      bool has_local = false;
      for (int q : m)
        if (kind_is_local(apt.states[static_cast<std::size_t>(q)].kind)) has_local = true;
      node.owner_box = !has_local;
    }

    int id = static_cast<int>(arena.nodes.size());
    arena.nodes.push_back(std::move(node));
    arena.out.emplace_back();
    node_ids.emplace(std::move(key), id);
    work.push_back(id);
    return id;
  }

  std::vector<int> modal_picks(const Macro& m) const {
    std::vector<int> picks;
    for (int q : m)
      if (apt.states[static_cast<std::size_t>(q)].kind == StateKind::ModalExistential)
        picks.push_back(q);
    return picks;
  }

  bool has_box(const Macro& m) const {
    for (int q : m)
      if (apt.states[static_cast<std::size_t>(q)].kind == StateKind::ModalUniversal)
        return true;
    return false;
  }

  Macro modal_update(const Macro& m, Letter sigma, int pick) const {
    Macro out;
    if (pick >= 0)
      for (int w : apt.delta(pick, sigma)) out.push_back(w);
    for (int q : m)
      if (apt.states[static_cast<std::size_t>(q)].kind == StateKind::ModalUniversal)
        for (int w : apt.delta(q, sigma)) out.push_back(w);
    normalize_macro(apt, out);
    return out;
  }

  // Enumerates choice functions over the given local-existential states
  // (every option list is nonempty) and hands each to `emit`.
  template <typename Emit>
  void for_each_choice(const std::vector<int>& dom, Letter sigma, Emit emit) const {
    std::vector<std::pair<int, int>> choice(dom.size());
    std::vector<std::vector<int>> opts(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) opts[i] = apt.delta(dom[i], sigma);
    std::vector<std::size_t> idx(dom.size(), 0);
    for (;;) {
      for (std::size_t i = 0; i < dom.size(); ++i) choice[i] = {dom[i], opts[i][idx[i]]};
      emit(choice);
      std::size_t i = 0;
      while (i < dom.size() && ++idx[i] == opts[i].size()) idx[i++] = 0;
      if (i == dom.size()) break;
    }
  }

  void expand(int id) {
    // Copy: arena.nodes may reallocate during expansion.
    StrategyArena::Node node = arena.nodes[static_cast<std::size_t>(id)];
    if (node.dead) return;
    const Macro& m = node.states;

    if (!node.has_letter) {
      if (options.satisfiability_mode) {
        std::vector<int> active_or;
        bool any_active = false;
        for (int q : m)
          if (local_active_sat(apt, q)) {
            any_active = true;
            if (apt.states[static_cast<std::size_t>(q)].kind == StateKind::LocalExistential)
              active_or.push_back(q);
          }
        if (any_active) {
          for_each_choice(active_or, 0, [&](const std::vector<std::pair<int, int>>& choice) {
            Macro next;
            for (int q : m) {
              const Apt::State& st = apt.states[static_cast<std::size_t>(q)];
              if (!local_active_sat(apt, q)) {
                next.push_back(q);
              } else if (st.kind == StateKind::LocalUniversal) {
                for (int w : st.succ) next.push_back(w);
              } else {
                for (auto& [s, t] : choice)
                  if (s == q) next.push_back(t);
              }
            }
            normalize_macro(apt, next);
            ArenaLabel l;
            l.kind = ArenaLabel::Kind::LocalChoice;
            l.has_letter = false;
            l.choice = choice;
            int lbl = label_id(l);
            int tgt = intern(std::move(next), -1);
            arena.out[static_cast<std::size_t>(id)].push_back({lbl, tgt});
          });
        } else {
          Letter sigma = canonical_letter(apt, m);
          ArenaLabel l;
          l.kind = ArenaLabel::Kind::LetterChoice;
          l.letter = sigma;
          int lbl = label_id(l);
          int tgt = intern(m, static_cast<int>(sigma));
          arena.out[static_cast<std::size_t>(id)].push_back({lbl, tgt});
        }
      } else {
        for (Letter sigma = 0; sigma < apt.alphabet_size(); ++sigma) {
          ArenaLabel l;
          l.kind = ArenaLabel::Kind::LetterChoice;
          l.letter = sigma;
          int lbl = label_id(l);
          int tgt = intern(m, static_cast<int>(sigma));
          arena.out[static_cast<std::size_t>(id)].push_back({lbl, tgt});
        }
      }
      return;
    }

    Letter sigma = node.letter;
    if (!options.satisfiability_mode && !node.owner_box) {
      // Pending local work under an explicit letter.
      std::vector<int> dom;
      for (int q : m)
        if (apt.states[static_cast<std::size_t>(q)].kind == StateKind::LocalExistential)
          dom.push_back(q);
      for_each_choice(dom, sigma, [&](const std::vector<std::pair<int, int>>& choice) {
        Macro next;
        for (int q : m) {
          const Apt::State& st = apt.states[static_cast<std::size_t>(q)];
          if (kind_is_modal(st.kind)) {
            next.push_back(q);
          } else if (st.kind == StateKind::LocalUniversal) {
            for (int w : apt.delta(q, sigma)) next.push_back(w);
          } else {
            for (auto& [s, t] : choice)
              if (s == q) next.push_back(t);
          }
        }
        normalize_macro(apt, next);
        ArenaLabel l;
        l.kind = ArenaLabel::Kind::LocalChoice;
        l.letter = sigma;
        l.choice = choice;
        int lbl = label_id(l);
        int tgt = intern(std::move(next), static_cast<int>(sigma));
        arena.out[static_cast<std::size_t>(id)].push_back({lbl, tgt});
      });
      return;
    }

    // Modal node: box picks the branch to follow.
    std::vector<int> picks = modal_picks(m);
    for (int pick : picks) {
      ArenaLabel l;
      l.kind = ArenaLabel::Kind::ModalPick;
      l.letter = sigma;
      l.has_letter = !options.satisfiability_mode;
      l.pick = pick;
      int lbl = label_id(l);
      int tgt = intern(modal_update(m, sigma, pick), -1);
      arena.out[static_cast<std::size_t>(id)].push_back({lbl, tgt});
    }
    if (picks.empty() && has_box(m) && options.serial_step) {
      ArenaLabel l;
      l.kind = ArenaLabel::Kind::SerialStep;
      l.letter = sigma;
      l.has_letter = !options.satisfiability_mode;
      int lbl = label_id(l);
      int tgt = intern(modal_update(m, sigma, -1), -1);
      arena.out[static_cast<std::size_t>(id)].push_back({lbl, tgt});
    }
  }
};

}  // namespace

StrategyArena build_arena(const Apt& apt, const ArenaOptions& options) {
  ArenaBuilder b(apt, options);
  b.arena.options = options;
  b.arena.initial = b.intern(Macro{apt.initial}, -1);
  while (!b.work.empty()) {
    int id = b.work.front();
    b.work.pop_front();
    b.expand(id);
  }
  // (m+1) * 2^n nodes, m the alphabet size.
  std::uint64_t bound = sat_mul64(sat_pow64(2, static_cast<int>(apt.atoms.size())) + 1,
                                  sat_pow64(2, static_cast<int>(apt.size())));
  if (b.arena.size() > bound)
    throw MusatError("strategy arena exceeded its size bound");
  return b.arena;
}

std::string arena_to_dot(const StrategyArena& arena, const Apt& apt) {
  std::ostringstream os;
  os << "digraph arena {\n";
  for (std::size_t v = 0; v < arena.size(); ++v) {
    const StrategyArena::Node& n = arena.nodes[v];
    os << "  n" << v << " [shape=" << (n.owner_box ? "box" : "diamond") << ", label=\"{";
    for (std::size_t i = 0; i < n.states.size(); ++i)
      os << (i ? "," : "") << n.states[i];
    os << "}";
    if (n.has_letter) os << " " << letter_string(apt, n.letter);
    if (n.dead) os << " dead";
    os << "\"];\n";
  }
  for (std::size_t v = 0; v < arena.size(); ++v)
    for (const StrategyArena::Edge& e : arena.out[v])
      os << "  n" << v << " -> n" << e.target << " [label=\""
         << arena.labels[static_cast<std::size_t>(e.label)].describe(apt) << "\"];\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Tracking automaton
// ---------------------------------------------------------------------------

std::vector<int> tracking_transitions(const Apt& apt, int q, const ArenaLabel& label,
                                      bool normalized) {
  const Apt::State& st = apt.states[static_cast<std::size_t>(q)];
  Letter sigma = label.letter;

  std::vector<int> out;
  bool is_sink = q == apt.top_state || q == apt.bot_state;
  bool is_literal = st.atom_test >= 0;

  if (normalized && is_sink) return {};

  switch (label.kind) {
    case ArenaLabel::Kind::LetterChoice:
      out = {q};
      break;
    case ArenaLabel::Kind::LocalChoice:
      if (kind_is_modal(st.kind)) {
        out = {q};
      } else if (normalized && is_literal) {
        out = {q};  // literals wait for the modal step
      } else if (st.kind == StateKind::LocalUniversal) {
        out = apt.delta(q, sigma);
      } else {
        // Chosen successor; states outside the recorded domain take their
        // first successor (labels are canonicalized to the macro-state).
        int target = -1;
        for (auto& [s, t] : label.choice)
          if (s == q) target = t;
        if (target < 0) target = apt.delta(q, sigma).at(0);
        out = {target};
      }
      break;
    case ArenaLabel::Kind::ModalPick:
      if (st.kind == StateKind::LocalExistential) out = {};
      else if (normalized && is_literal) out = {};
      else if (st.kind == StateKind::LocalUniversal) out = apt.delta(q, sigma);
      else if (st.kind == StateKind::ModalExistential)
        out = (q == label.pick) ? apt.delta(q, sigma) : std::vector<int>{};
      else out = apt.delta(q, sigma);
      break;
    case ArenaLabel::Kind::SerialStep:
      out = (st.kind == StateKind::ModalUniversal) ? apt.delta(q, sigma)
                                                   : std::vector<int>{};
      break;
  }
  if (normalized) {
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](int w) { return w == apt.top_state || w == apt.bot_state; }),
              out.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WordAutomaton build_tracking(const Apt& apt, const StrategyArena& arena) {
  WordAutomaton t;
  t.flavor = AcceptanceFlavor::Parity;
  for (const ArenaLabel& l : arena.labels) t.letter_names.push_back(l.describe(apt));
  for (std::size_t q = 0; q < apt.size(); ++q)
    t.add_state(apt.states[q].priority + 1, apt.states[q].label);
  t.initial = apt.initial;
  bool normalized = arena.options.satisfiability_mode;
  for (int q = 0; q < t.state_count(); ++q)
    for (std::size_t l = 0; l < arena.labels.size(); ++l)
      for (int w : tracking_transitions(apt, q, arena.labels[l], normalized))
        t.add_edge(q, static_cast<int>(l), w);
  return t;
}

// ---------------------------------------------------------------------------
//  Product game
// ---------------------------------------------------------------------------

ProductGame build_product_game(const StrategyArena& arena, const WordAutomaton& tracker) {
  if (tracker.letter_count() != static_cast<int>(arena.labels.size()))
    throw MusatError("tracker alphabet does not match the arena labels");

  ProductGame p;
  std::map<std::tuple<int, int, int>, int> ids;  // (arena node, tracker, label or -1)
  std::deque<std::tuple<int, int, int>> work;
  auto intern = [&](int v, int t, int label) {
    auto key = std::make_tuple(v, t, label);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    bool owner_box = label >= 0 || arena.nodes[static_cast<std::size_t>(v)].owner_box;
    int prio = tracker.priority[static_cast<std::size_t>(t)] + 1;
    std::ostringstream name;
    if (label >= 0) name << "~";
    name << "a" << v << "/t" << t;
    int id = p.game.add_node(owner_box, prio, name.str());
    p.arena_node.push_back(v);
    p.tracker_state.push_back(t);
    p.label.push_back(label);
    ids.emplace(key, id);
    work.emplace_back(v, t, label);
    return id;
  };

  p.initial = intern(arena.initial, tracker.initial, -1);
  std::uint64_t positions = 0;
  while (!work.empty()) {
    auto [v, t, label] = work.front();
    work.pop_front();
    int id = ids.at({v, t, label});
    if (label < 0) {
      ++positions;
      for (const StrategyArena::Edge& e : arena.out[static_cast<std::size_t>(v)])
        p.game.add_edge(id, intern(e.target, t, e.label));
    } else {
      for (int t2 : tracker.successors(t, label))
        p.game.add_edge(id, intern(v, t2, -1));
    }
  }

  std::uint64_t bound = sat_mul64(static_cast<std::uint64_t>(arena.size()),
                                  static_cast<std::uint64_t>(tracker.state_count()));
  if (positions > bound)
    throw MusatError("product game exceeded its size bound");
  return p;
}

// ---------------------------------------------------------------------------
// Acceptance game
// ---------------------------------------------------------------------------

ParityGame build_acceptance_game(const Apt& apt, const KripkeStructure& k) {
  k.validate();
  ParityGame g;
  int nq = static_cast<int>(apt.size());
  auto node_id = [&](int w, int q) { return w * nq + q; };

  std::vector<Letter> world_letter(k.size(), 0);
  for (std::size_t w = 0; w < k.size(); ++w)
    for (std::size_t i = 0; i < apt.atoms.size(); ++i)
      if (k.worlds[w].atoms.count(apt.atoms[i]))
        world_letter[w] |= Letter{1} << i;

  for (int w = 0; w < static_cast<int>(k.size()); ++w)
    for (int q = 0; q < nq; ++q) {
      const Apt::State& st = apt.states[static_cast<std::size_t>(q)];
      bool diamond_owned = st.kind == StateKind::LocalExistential ||
                           st.kind == StateKind::ModalExistential;
      g.add_node(!diamond_owned, st.priority,
                 k.worlds[static_cast<std::size_t>(w)].id + "," + st.label);
    }
  for (int w = 0; w < static_cast<int>(k.size()); ++w)
    for (int q = 0; q < nq; ++q) {
      const Apt::State& st = apt.states[static_cast<std::size_t>(q)];
      std::vector<int> succs = apt.delta(q, world_letter[static_cast<std::size_t>(w)]);
      if (kind_is_local(st.kind)) {
        for (int q2 : succs) g.add_edge(node_id(w, q), node_id(w, q2));
      } else {
        for (int w2 : k.succ[static_cast<std::size_t>(w)])
          for (int q2 : succs) g.add_edge(node_id(w, q), node_id(w2, q2));
      }
    }
  return g;
}

}  // namespace musat
