#include "musat/game_solver.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace musat {

namespace {

// Internal total game: dead ends replaced by self-loops whose priority makes
// the looping play losing for the node's owner.  Nothing routes through a
// former dead end, so the priority override is unobservable elsewhere.
struct TotalGame {
  std::vector<bool> owner_box;
  std::vector<int> priority;
  std::vector<std::vector<int>> succ;  // deduplicated
  std::vector<std::vector<int>> pred;
  std::vector<bool> was_dead_end;

  explicit TotalGame(const ParityGame& g) {
    std::size_t n = g.size();
    owner_box.resize(n);
    priority.resize(n);
    succ.resize(n);
    pred.resize(n);
    was_dead_end.assign(n, false);
    for (std::size_t v = 0; v < n; ++v) {
      owner_box[v] = g.nodes[v].owner_box;
      priority[v] = g.nodes[v].priority;
      succ[v] = g.succ[v];
      std::sort(succ[v].begin(), succ[v].end());
      succ[v].erase(std::unique(succ[v].begin(), succ[v].end()), succ[v].end());
      if (succ[v].empty()) {
        was_dead_end[v] = true;
        succ[v].push_back(static_cast<int>(v));
        priority[v] = owner_box[v] ? 0 : 1;
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      for (int w : succ[v]) pred[static_cast<std::size_t>(w)].push_back(static_cast<int>(v));
  }

  std::size_t size() const { return owner_box.size(); }

  // Attractor of `targets` for the given player within `alive`; nodes added
  // through a witnessing edge get it recorded in `strategy` (targets do
  // not).  Marks attracted nodes in `in_attr`.
  std::vector<int> attractor(bool player_box, const std::vector<int>& targets,
                             const std::vector<bool>& alive,
                             std::vector<bool>& in_attr,
                             std::unordered_map<int, int>* strategy) const {
    std::vector<int> cnt(size(), 0);
    for (std::size_t v = 0; v < size(); ++v) {
      if (!alive[v]) continue;
      for (int w : succ[v])
        if (alive[static_cast<std::size_t>(w)]) cnt[v]++;
    }
    std::deque<int> queue;
    std::vector<int> out;
    for (int t : targets) {
      if (!alive[static_cast<std::size_t>(t)] || in_attr[static_cast<std::size_t>(t)]) continue;
      in_attr[static_cast<std::size_t>(t)] = true;
      queue.push_back(t);
      out.push_back(t);
    }
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int u : pred[static_cast<std::size_t>(v)]) {
        auto su = static_cast<std::size_t>(u);
        if (!alive[su] || in_attr[su]) continue;
        if (owner_box[su] == player_box) {
          in_attr[su] = true;
          if (strategy) strategy->emplace(u, v);
          queue.push_back(u);
          out.push_back(u);
        } else if (--cnt[su] == 0) {
          in_attr[su] = true;
          queue.push_back(u);
          out.push_back(u);
        }
      }
    }
    return out;
  }

  int first_alive_successor(int v, const std::vector<bool>& alive) const {
    for (int w : succ[static_cast<std::size_t>(v)])
      if (alive[static_cast<std::size_t>(w)]) return w;
    throw MusatError("solver: node lost all successors");
  }
};

struct ZielonkaSolver {
  const TotalGame& t;
  std::unordered_map<int, int> strategy[2];  // 0 diamond, 1 box
  std::vector<bool> winner_box;

  explicit ZielonkaSolver(const TotalGame& game)
      : t(game), winner_box(game.size(), false) {}

  // `alive` is consumed; winners of alive nodes end up in winner_box.
  void solve(std::vector<bool> alive, int alive_count) {
    if (alive_count == 0) return;
    int p = -1;
    for (std::size_t v = 0; v < t.size(); ++v)
      if (alive[v]) p = std::max(p, t.priority[v]);
    bool player_box = p % 2 == 1;
    int pl = player_box ? 1 : 0;

    std::vector<int> tops;
    for (std::size_t v = 0; v < t.size(); ++v)
      if (alive[v] && t.priority[v] == p) tops.push_back(static_cast<int>(v));

    std::vector<bool> in_a(t.size(), false);
    std::unordered_map<int, int> attr_strategy;
    std::vector<int> a = t.attractor(player_box, tops, alive, in_a, &attr_strategy);

    std::vector<bool> sub = alive;
    for (int v : a) sub[static_cast<std::size_t>(v)] = false;
    ZielonkaSolver inner(t);
    inner.solve(sub, alive_count - static_cast<int>(a.size()));

    // Opponent nodes the recursion awarded to the opponent.
    std::vector<int> opp_won;
    for (std::size_t v = 0; v < t.size(); ++v)
      if (sub[v] && inner.winner_box[v] != player_box) opp_won.push_back(static_cast<int>(v));

    if (opp_won.empty()) {
      for (std::size_t v = 0; v < t.size(); ++v)
        if (alive[v]) winner_box[v] = player_box;
      strategy[pl] = std::move(inner.strategy[pl]);
      for (auto& [v, w] : attr_strategy) strategy[pl][v] = w;
      for (int v : tops)
        if (t.owner_box[static_cast<std::size_t>(v)] == player_box &&
            !strategy[pl].count(v))
          strategy[pl][v] = t.first_alive_successor(v, alive);
      return;
    }

    std::vector<bool> in_b(t.size(), false);
    std::unordered_map<int, int> escape_strategy;
    std::vector<int> b = t.attractor(!player_box, opp_won, alive, in_b, &escape_strategy);

    std::vector<bool> rest = alive;
    for (int v : b) rest[static_cast<std::size_t>(v)] = false;
    ZielonkaSolver outer(t);
    outer.solve(rest, alive_count - static_cast<int>(b.size()));

    for (std::size_t v = 0; v < t.size(); ++v)
      if (rest[v]) winner_box[v] = outer.winner_box[v];
    for (int v : b) winner_box[static_cast<std::size_t>(v)] = !player_box;

    strategy[pl] = std::move(outer.strategy[pl]);
    strategy[1 - pl] = std::move(outer.strategy[1 - pl]);
    for (auto& [v, w] : inner.strategy[1 - pl]) strategy[1 - pl].emplace(v, w);
    for (auto& [v, w] : escape_strategy) strategy[1 - pl].emplace(v, w);
  }
};

Solution finish(const TotalGame& t, std::vector<bool> winner_box,
                std::unordered_map<int, int> diamond, std::unordered_map<int, int> box) {
  Solution s;
  s.winner_box = std::move(winner_box);
  // Strip strategy entries at former dead ends (their self-loop is internal)
  // and entries for nodes the player does not own or win.
  auto keep = [&](const std::unordered_map<int, int>& in, bool box_player) {
    std::unordered_map<int, int> out;
    for (auto& [v, w] : in) {
      auto sv = static_cast<std::size_t>(v);
      if (t.was_dead_end[sv]) continue;
      if (t.owner_box[sv] != box_player) continue;
      if (s.winner_box[sv] != box_player) continue;
      out.emplace(v, w);
    }
    return out;
  };
  s.diamond_strategy = keep(diamond, false);
  s.box_strategy = keep(box, true);
  return s;
}

}  // namespace

Solution solve_parity(const ParityGame& g) {
  TotalGame t(g);
  ZielonkaSolver z(t);
  z.solve(std::vector<bool>(t.size(), true), static_cast<int>(t.size()));
  return finish(t, std::move(z.winner_box), std::move(z.strategy[0]),
                std::move(z.strategy[1]));
}

Solution solve_buchi(const ParityGame& g) {
  for (const ParityGame::Node& n : g.nodes)
    if (n.priority != 1 && n.priority != 2)
      throw MusatError("solve_buchi: priority outside {1,2}");

  TotalGame t(g);
  // Dead-end self-loops got priorities 0/1; remap to the Buchi range with
  // the same parity.
  for (std::size_t v = 0; v < t.size(); ++v)
    if (t.was_dead_end[v]) t.priority[v] = t.owner_box[v] ? 2 : 1;

  std::vector<bool> alive(t.size(), true);
  std::vector<bool> winner_box(t.size(), false);
  std::unordered_map<int, int> diamond_strategy, box_strategy;

  for (;;) {
    std::vector<int> accepting;
    for (std::size_t v = 0; v < t.size(); ++v)
      if (alive[v] && t.priority[v] == 2) accepting.push_back(static_cast<int>(v));

    std::vector<bool> in_r(t.size(), false);
    std::unordered_map<int, int> reach_strategy;
    t.attractor(false, accepting, alive, in_r, &reach_strategy);

    std::vector<int> avoid;
    for (std::size_t v = 0; v < t.size(); ++v)
      if (alive[v] && !in_r[v]) avoid.push_back(static_cast<int>(v));

    if (avoid.empty()) {
      // Player diamond forces accepting visits forever: combine the
      // attractor moves with a re-entry move at accepting nodes.
      for (auto& [v, w] : reach_strategy)
        if (!t.owner_box[static_cast<std::size_t>(v)]) diamond_strategy.emplace(v, w);
      for (int v : accepting)
        if (!t.owner_box[static_cast<std::size_t>(v)] && !diamond_strategy.count(v))
          diamond_strategy.emplace(v, t.first_alive_successor(v, alive));
      break;
    }

    // Box wins `avoid` by staying outside the diamond attractor, and its
    // box-attractor on top of that.
    std::vector<bool> in_b(t.size(), false);
    std::unordered_map<int, int> to_avoid;
    std::vector<int> b = t.attractor(true, avoid, alive, in_b, &to_avoid);
    for (int v : avoid) {
      auto sv = static_cast<std::size_t>(v);
      if (!t.owner_box[sv]) continue;
      for (int w : t.succ[sv]) {
        auto sw = static_cast<std::size_t>(w);
        if (alive[sw] && !in_r[sw]) { box_strategy.emplace(v, w); break; }
      }
    }
    for (auto& [v, w] : to_avoid)
      if (t.owner_box[static_cast<std::size_t>(v)]) box_strategy.emplace(v, w);
    for (int v : b) {
      winner_box[static_cast<std::size_t>(v)] = true;
      alive[static_cast<std::size_t>(v)] = false;
    }
  }
  return finish(t, std::move(winner_box), std::move(diamond_strategy),
                std::move(box_strategy));
}

Solution solve_game(const ParityGame& g) {
  return g.is_buchi() ? solve_buchi(g) : solve_parity(g);
}

std::string parity_game_to_pgsolver(const ParityGame& g) {
  std::ostringstream os;
  os << "parity " << (g.size() == 0 ? 0 : g.size() - 1) << ";\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    os << v << " " << g.nodes[v].priority << " " << (g.nodes[v].owner_box ? 1 : 0) << " ";
    if (g.succ[v].empty()) {
      os << "-";  // dead end marker (nonstandard but round-trips)
    } else {
      for (std::size_t i = 0; i < g.succ[v].size(); ++i)
        os << (i ? "," : "") << g.succ[v][i];
    }
    if (!g.nodes[v].name.empty()) os << " \"" << g.nodes[v].name << "\"";
    os << ";\n";
  }
  return os.str();
}

ParityGame parity_game_from_pgsolver(const std::string& text) {
  ParityGame g;
  std::istringstream in(text);
  std::string line;
  struct Row { int id, prio, owner; std::vector<int> succ; std::string name; };
  std::vector<Row> rows;
  int max_id = -1;
  while (std::getline(in, line)) {
    // Strip comments and the header.
    auto semi = line.find(';');
    if (semi != std::string::npos) line = line.substr(0, semi);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "parity") continue;
    Row r;
    try {
      r.id = std::stoi(first);
    } catch (...) {
      throw MusatError("pgsolver parse: bad node id '" + first + "'");
    }
    if (!(ls >> r.prio >> r.owner))
      throw MusatError("pgsolver parse: missing priority/owner");
    std::string succs;
    if (ls >> succs && succs != "-") {
      std::istringstream ss(succs);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) r.succ.push_back(std::stoi(tok));
    }
    std::string rest;
    std::getline(ls, rest);
    auto q1 = rest.find('"');
    auto q2 = rest.rfind('"');
    if (q1 != std::string::npos && q2 > q1) r.name = rest.substr(q1 + 1, q2 - q1 - 1);
    max_id = std::max(max_id, r.id);
    rows.push_back(std::move(r));
  }
  for (int v = 0; v <= max_id; ++v) g.add_node(false, 0);
  for (Row& r : rows) {
    auto sv = static_cast<std::size_t>(r.id);
    g.nodes[sv].owner_box = r.owner == 1;
    g.nodes[sv].priority = r.prio;
    g.nodes[sv].name = r.name;
    for (int w : r.succ) {
      if (w < 0 || w > max_id) throw MusatError("pgsolver parse: edge target out of range");
      g.add_edge(r.id, w);
    }
  }
  return g;
}

}  // namespace musat
