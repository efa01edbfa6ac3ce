#include "musat/kripke.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace musat {

void KripkeStructure::validate() const {
  if (worlds.empty()) throw ValidationError("structure has no worlds");
  if (initial < 0 || static_cast<std::size_t>(initial) >= worlds.size())
    throw ValidationError("initial world out of range");
  if (succ.size() != worlds.size())
    throw ValidationError("successor table size mismatch");
  for (std::size_t w = 0; w < worlds.size(); ++w) {
    if (succ[w].empty())
      throw ValidationError("structure is not serial: world '" + worlds[w].id +
                            "' has no successor");
    for (int v : succ[w])
      if (v < 0 || static_cast<std::size_t>(v) >= worlds.size())
        throw ValidationError("edge target out of range at world '" + worlds[w].id + "'");
  }
}

KripkeStructure kripke_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  KripkeStructure k;
  if (!j.contains("worlds") || !j["worlds"].is_array())
    throw ValidationError("missing 'worlds' array");
  std::unordered_map<std::string, int> ids;
  for (auto& jw : j["worlds"]) {
    KripkeStructure::World w;
    w.id = jw.at("id").get<std::string>();
    if (!ids.emplace(w.id, static_cast<int>(k.worlds.size())).second)
      throw ValidationError("duplicate world id '" + w.id + "'");
    if (jw.contains("atoms"))
      for (auto& a : jw["atoms"])
        w.atoms.insert(Formula::intern_symbol(a.get<std::string>()));
    k.worlds.push_back(std::move(w));
  }
  auto lookup = [&](const std::string& id) {
    auto it = ids.find(id);
    if (it == ids.end()) throw ValidationError("unknown world id '" + id + "'");
    return it->second;
  };
  k.initial = lookup(j.at("initial").get<std::string>());
  k.succ.assign(k.worlds.size(), {});
  if (j.contains("edges"))
    for (auto& je : j["edges"]) {
      if (!je.is_array() || je.size() != 2)
        throw ValidationError("edges must be [from, to] pairs");
      int from = lookup(je[0].get<std::string>());
      int to = lookup(je[1].get<std::string>());
      k.succ[static_cast<std::size_t>(from)].push_back(to);
    }
  k.validate();
  return k;
}

std::string kripke_to_json(const KripkeStructure& k) {
  nlohmann::json j;
  j["worlds"] = nlohmann::json::array();
  for (auto& w : k.worlds) {
    nlohmann::json jw;
    jw["id"] = w.id;
    jw["atoms"] = nlohmann::json::array();
    for (int a : w.atoms) jw["atoms"].push_back(std::string(Formula::symbol_text(a)));
    j["worlds"].push_back(jw);
  }
  j["initial"] = k.worlds[static_cast<std::size_t>(k.initial)].id;
  j["edges"] = nlohmann::json::array();
  for (std::size_t w = 0; w < k.succ.size(); ++w)
    for (int v : k.succ[w])
      j["edges"].push_back({k.worlds[w].id, k.worlds[static_cast<std::size_t>(v)].id});
  return j.dump(2);
}

KripkeStructure load_kripke_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return kripke_from_json(ss.str());
}

WorldSet eval_semantics(Formula f, const KripkeStructure& k, const Valuation& eta) {
  switch (f.op()) {
    case Op::Top: {
      WorldSet all;
      for (int w = 0; w < static_cast<int>(k.size()); ++w) all.insert(w);
      return all;
    }
    case Op::Bot:
      return {};
    case Op::Atom: {
      WorldSet s;
      for (int w = 0; w < static_cast<int>(k.size()); ++w)
        if (k.world_has_atom(w, f.symbol())) s.insert(w);
      return s;
    }
    case Op::NegAtom: {
      WorldSet s;
      for (int w = 0; w < static_cast<int>(k.size()); ++w)
        if (!k.world_has_atom(w, f.symbol())) s.insert(w);
      return s;
    }
    case Op::Var: {
      if (!eta.defined(f.symbol()))
        throw MusatError("unbound free variable '" +
                         std::string(f.symbol_name()) + "' in evaluation");
      return eta.get(f.symbol());
    }
    case Op::Or: {
      WorldSet l = eval_semantics(f.left(), k, eta);
      WorldSet r = eval_semantics(f.right(), k, eta);
      l.insert(r.begin(), r.end());
      return l;
    }
    case Op::And: {
      WorldSet l = eval_semantics(f.left(), k, eta);
      WorldSet r = eval_semantics(f.right(), k, eta);
      WorldSet out;
      for (int w : l)
        if (r.count(w)) out.insert(w);
      return out;
    }
    case Op::Diamond: {
      WorldSet c = eval_semantics(f.child(), k, eta);
      WorldSet out;
      for (int w = 0; w < static_cast<int>(k.size()); ++w)
        for (int v : k.succ[static_cast<std::size_t>(w)])
          if (c.count(v)) { out.insert(w); break; }
      return out;
    }
    case Op::Box: {
      WorldSet c = eval_semantics(f.child(), k, eta);
      WorldSet out;
      for (int w = 0; w < static_cast<int>(k.size()); ++w) {
        bool all = true;
        for (int v : k.succ[static_cast<std::size_t>(w)])
          if (!c.count(v)) { all = false; break; }
        if (all) out.insert(w);
      }
      return out;
    }
    case Op::Mu: {
      WorldSet cur;
      for (;;) {
        WorldSet nxt = eval_semantics(f.child(), k, eta.with(f.symbol(), cur));
        if (nxt == cur) return cur;
        cur = std::move(nxt);
      }
    }
    case Op::Nu: {
      WorldSet cur;
      for (int w = 0; w < static_cast<int>(k.size()); ++w) cur.insert(w);
      for (;;) {
        WorldSet nxt = eval_semantics(f.child(), k, eta.with(f.symbol(), cur));
        if (nxt == cur) return cur;
        cur = std::move(nxt);
      }
    }
  }
  return {};
}

bool satisfies(Formula f, const KripkeStructure& k) {
  if (!f.closed()) throw MusatError("satisfies requires a closed formula");
  Valuation empty;
  return eval_semantics(f, k, empty).count(k.initial) != 0;
}

KripkeStructure bisimulation_quotient(const KripkeStructure& k) {
  std::size_t n = k.size();
  // Initial partition by labeling, then refine by the set of successor
  // classes until stable.
  std::vector<int> cls(n);
  {
    std::map<std::set<int>, int> by_label;
    for (std::size_t w = 0; w < n; ++w)
      cls[w] = by_label.emplace(k.worlds[w].atoms, static_cast<int>(by_label.size()))
                   .first->second;
  }
  for (;;) {
    std::map<std::pair<int, std::set<int>>, int> refined;
    std::vector<int> next(n);
    for (std::size_t w = 0; w < n; ++w) {
      std::set<int> succ_classes;
      for (int v : k.succ[w]) succ_classes.insert(cls[static_cast<std::size_t>(v)]);
      auto key = std::make_pair(cls[w], std::move(succ_classes));
      next[w] = refined.emplace(std::move(key), static_cast<int>(refined.size()))
                    .first->second;
    }
    if (next == cls) break;
    cls = std::move(next);
  }

  int classes = 0;
  for (int c : cls) classes = std::max(classes, c + 1);
  KripkeStructure q;
  q.succ.resize(static_cast<std::size_t>(classes));
  std::vector<int> representative(static_cast<std::size_t>(classes), -1);
  for (std::size_t w = 0; w < n; ++w)
    if (representative[static_cast<std::size_t>(cls[w])] < 0)
      representative[static_cast<std::size_t>(cls[w])] = static_cast<int>(w);
  for (int c = 0; c < classes; ++c) {
    auto rep = static_cast<std::size_t>(representative[static_cast<std::size_t>(c)]);
    KripkeStructure::World world;
    world.id = "w" + std::to_string(c);
    world.atoms = k.worlds[rep].atoms;
    q.worlds.push_back(std::move(world));
    std::set<int> targets;
    for (int v : k.succ[rep]) targets.insert(cls[static_cast<std::size_t>(v)]);
    q.succ[static_cast<std::size_t>(c)].assign(targets.begin(), targets.end());
  }
  q.initial = cls[static_cast<std::size_t>(k.initial)];
  q.validate();
  return q;
}

}  // namespace musat
