#include "musat/pipeline.hpp"

#include <chrono>
#include <map>
#include <sstream>

#include "json.hpp"

namespace musat {

const char* tracking_method_name(TrackingMethod m) {
  switch (m) {
    case TrackingMethod::Circle: return "circle";
    case TrackingMethod::MiyanoHayashi: return "miyano-hayashi";
    case TrackingMethod::Focus: return "focus";
    case TrackingMethod::Permutation: return "permutation";
    case TrackingMethod::Unsupported: return "unsupported";
  }
  return "?";
}

namespace {

struct StageClock {
  std::vector<StageTiming>& out;
  std::string stage;
  std::chrono::steady_clock::time_point start;
  StageClock(std::vector<StageTiming>& o, std::string s)
      : out(o), stage(std::move(s)), start(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    auto end = std::chrono::steady_clock::now();
    out.push_back({stage, std::chrono::duration<double, std::milli>(end - start).count()});
  }
};

TrackingMethod dispatch(const FragmentReport& fr) {
  switch (fr.best_fragment) {
    case Fragment::LimitLinear: return TrackingMethod::Circle;
    case Fragment::AFAconjunctive: return TrackingMethod::Focus;
    case Fragment::AlternationFree: return TrackingMethod::MiyanoHayashi;
    case Fragment::Aconjunctive: return TrackingMethod::Permutation;
    case Fragment::Unrestricted: return TrackingMethod::Unsupported;
  }
  return TrackingMethod::Unsupported;
}

}  // namespace

WordAutomaton build_method_tracker(TrackingMethod method, const WordAutomaton& tracking) {
  switch (method) {
    case TrackingMethod::Circle:
      return circle_determinize(weak_to_cobuchi(tracking));
    case TrackingMethod::MiyanoHayashi:
      return miyano_hayashi(weak_to_cobuchi(tracking));
    case TrackingMethod::Focus:
      return focus_history_determinize(weak_to_cobuchi(tracking));
    case TrackingMethod::Permutation:
      try {
        return permutation_determinize(
            prune_rejecting_buchi(parity_to_buchi(tracking)));
      } catch (const MusatError& e) {
        throw UnsupportedFragmentError(
            std::string("the tracking automaton resists the permutation method (") +
            e.what() + "); the general parity determinizations are not provided");
      }
    case TrackingMethod::Unsupported:
      break;
  }
  throw UnsupportedFragmentError(
      "satisfiability beyond the limit-linear, alternation-free and "
      "aconjunctive fragments needs a general parity (history-)determinization, "
      "which is not provided");
}

PipelineReport decide_sat(Formula f, const PipelineOptions& options) {
  PipelineReport report;
  if (!f.valid()) throw MusatError("invalid formula");
  if (!f.closed()) throw MusatError("decide_sat requires a closed formula");

  CleanResult clean = make_clean(f);
  report.formula = clean.formula;
  report.warnings = clean.warnings;
  if (!check_guarded(clean.formula))
    throw MusatError("unguarded formula: every fixpoint variable needs a modal "
                     "operator between binder and use");

  ClosureTable table;
  {
    StageClock clock(report.timings, "closure");
    table = alternation(clean.formula, closure(clean.formula));
  }
  report.closure_size = table.size();
  report.fragment = classify_fragment(clean.formula, table);

  report.method = options.force_method ? *options.force_method : dispatch(report.fragment);

  Apt apt;
  {
    StageClock clock(report.timings, "automaton");
    TranslationOptions topt;
    topt.atom_cap = options.atom_cap;
    apt = formula_to_apt(clean.formula, table, topt);
  }
  report.apt_states = apt.size();
  report.apt_rank = apt.rank();

  StrategyArena arena;
  {
    StageClock clock(report.timings, "arena");
    arena = build_arena(apt);
  }
  report.arena_nodes = arena.size();

  WordAutomaton tracking;
  {
    StageClock clock(report.timings, "tracking");
    tracking = build_tracking(apt, arena);
  }
  report.tracking_states = static_cast<std::size_t>(tracking.state_count());
  if (report.tracking_states != report.apt_states)
    throw MusatError("tracking automaton must share the automaton's states");

  // The bespoke co-Buchi trackers have structural preconditions that the
  // syntactic fragments do not fully force: a conjunct without its own free
  // least-fixpoint variable can still loop back through the conjunction and
  // spoil the determinism of the accepting part, and an inconsistent loop
  // body truncates its tracking cycle into bare stuttering.  The breakpoint
  // tracker covers every weak case, so automatic dispatch falls back to it;
  // forcing a method keeps the strict precondition.
  if (!options.force_method && report.fragment.alternation_free) {
    WordAutomaton cobuchi = weak_to_cobuchi(tracking);
    WordClass cls = classify_word(cobuchi);
    if ((report.method == TrackingMethod::Focus && !cls.limit_deterministic) ||
        (report.method == TrackingMethod::Circle && !cls.limit_linear))
      report.method = TrackingMethod::MiyanoHayashi;
  }

  WordAutomaton tracker;
  {
    StageClock clock(report.timings, "determinization");
    tracker = build_method_tracker(report.method, tracking);
  }
  report.tracker_states = static_cast<std::size_t>(tracker.state_count());

  ProductGame product;
  {
    StageClock clock(report.timings, "product");
    product = build_product_game(arena, tracker);
  }
  report.game_nodes = product.game.size();
  report.game_positions = 0;
  for (std::size_t v = 0; v < product.game.size(); ++v)
    if (product.is_position(static_cast<int>(v))) report.game_positions++;
  report.game_priorities = product.game.max_priority();

  Solution solution;
  {
    StageClock clock(report.timings, "solve");
    solution = solve_game(product.game);
  }
  report.satisfiable = solution.diamond_wins(product.initial);

  if (report.satisfiable && options.want_witness) {
    StageClock clock(report.timings, "witness");
    KripkeStructure witness;
    if (tracker.deterministic()) {
      witness = extract_model(solution, product, arena, apt, tracker);
    } else {
      // History-deterministic tracker: re-run with the deterministic
      // breakpoint tracker for extraction.
      WordAutomaton det = miyano_hayashi(weak_to_cobuchi(tracking));
      ProductGame det_product = build_product_game(arena, det);
      Solution det_solution = solve_game(det_product.game);
      if (!det_solution.diamond_wins(det_product.initial))
        throw MusatError("tracker disagreement between the history-deterministic "
                         "and deterministic pipelines");
      witness = extract_model(det_solution, det_product, arena, apt, det);
    }
    if (!satisfies(clean.formula, witness))
      throw MusatError("extracted witness failed semantic verification");
    report.witness = std::move(witness);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Witness extraction
// ---------------------------------------------------------------------------

namespace {

// Follows diamond's strategy (and the deterministic tracker steps) from a
// position until the next box-owned position.
int run_to_box_position(const Solution& solution, const ProductGame& product,
                        const StrategyArena& arena, int node) {
  std::size_t guard = product.game.size() + 1;
  while (guard-- > 0) {
    if (product.is_position(node)) {
      int v = product.arena_node[static_cast<std::size_t>(node)];
      if (arena.nodes[static_cast<std::size_t>(v)].owner_box) return node;
      auto it = solution.diamond_strategy.find(node);
      if (it == solution.diamond_strategy.end())
        throw MusatError("extraction: no strategy at a diamond position");
      node = it->second;
    } else {
      const std::vector<int>& succ = product.game.succ[static_cast<std::size_t>(node)];
      if (succ.size() != 1)
        throw MusatError("extraction requires a deterministic tracker");
      node = succ[0];
    }
  }
  throw MusatError("extraction: local play did not reach a modal position");
}

}  // namespace

KripkeStructure extract_model(const Solution& solution, const ProductGame& product,
                              const StrategyArena& arena, const Apt& apt,
                              const WordAutomaton& tracker) {
  if (!tracker.deterministic())
    throw MusatError("extract_model requires a deterministic tracker");
  if (!solution.diamond_wins(product.initial))
    throw MusatError("extract_model requires a winning initial node");

  KripkeStructure k;
  std::map<int, int> world_of;  // box position game node -> world index
  std::vector<int> work;

  auto world_for = [&](int node) {
    auto it = world_of.find(node);
    if (it != world_of.end()) return it->second;
    int v = product.arena_node[static_cast<std::size_t>(node)];
    const StrategyArena::Node& an = arena.nodes[static_cast<std::size_t>(v)];
    KripkeStructure::World w;
    w.id = "w" + std::to_string(k.worlds.size());
    for (std::size_t i = 0; i < apt.atoms.size(); ++i)
      if (an.has_letter && ((an.letter >> i) & 1u)) w.atoms.insert(apt.atoms[i]);
    int idx = static_cast<int>(k.worlds.size());
    k.worlds.push_back(std::move(w));
    k.succ.emplace_back();
    world_of.emplace(node, idx);
    work.push_back(node);
    return idx;
  };

  k.initial = world_for(run_to_box_position(solution, product, arena, product.initial));
  while (!work.empty()) {
    int node = work.back();
    work.pop_back();
    int idx = world_of.at(node);
    const std::vector<int>& succ = product.game.succ[static_cast<std::size_t>(node)];
    if (succ.empty()) {
      // No modal obligations: a diamond-won dead end; close with a self-loop.
      k.succ[static_cast<std::size_t>(idx)].push_back(idx);
      continue;
    }
    for (int mid : succ) {
      const std::vector<int>& after = product.game.succ[static_cast<std::size_t>(mid)];
      if (after.size() != 1)
        throw MusatError("extraction requires a deterministic tracker");
      int child = world_for(run_to_box_position(solution, product, arena, after[0]));
      k.succ[static_cast<std::size_t>(idx)].push_back(child);
    }
  }
  k.validate();
  // Tracker components multiply strategy-equivalent worlds apart; fold the
  // bisimilar ones back together.
  return bisimulation_quotient(k);
}

// ---------------------------------------------------------------------------
// Model checking
// ---------------------------------------------------------------------------

ModelCheckReport model_check_report(Formula f, const KripkeStructure& k) {
  if (!f.closed()) throw MusatError("model_check requires a closed formula");
  k.validate();
  CleanResult clean = make_clean(f);
  ClosureTable table = alternation(clean.formula, closure(clean.formula));
  Apt apt = formula_to_apt(clean.formula, table);
  ParityGame game = build_acceptance_game(apt, k);
  Solution solution = solve_parity(game);

  ModelCheckReport r;
  r.game_nodes = game.size();
  r.game_priorities = game.max_priority();
  int initial_node = k.initial * static_cast<int>(apt.size()) + apt.initial;
  r.holds = solution.diamond_wins(initial_node);
  return r;
}

bool model_check(Formula f, const KripkeStructure& k) {
  return model_check_report(f, k).holds;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

std::string PipelineReport::to_json() const {
  nlohmann::json j;
  j["formula"] = formula.valid() ? formula.to_string() : "";
  j["verdict"] = satisfiable ? "sat" : "unsat";
  j["fragment"] = fragment_name(fragment.best_fragment);
  j["alternation_depth"] = fragment.alternation_depth;
  j["flags"] = {{"limit_linear", fragment.limit_linear},
                {"alternation_free", fragment.alternation_free},
                {"aconjunctive", fragment.aconjunctive},
                {"af_aconjunctive", fragment.af_aconjunctive}};
  j["method"] = tracking_method_name(method);
  j["sizes"] = {{"closure", closure_size},
                {"apt_states", apt_states},
                {"apt_rank", apt_rank},
                {"tracking_states", tracking_states},
                {"tracker_states", tracker_states},
                {"arena_nodes", arena_nodes},
                {"game_nodes", game_nodes},
                {"game_positions", game_positions},
                {"game_priorities", game_priorities}};
  if (!warnings.empty()) j["warnings"] = warnings;
  if (witness) j["witness"] = nlohmann::json::parse(kripke_to_json(*witness));
  j["timings_ms"] = nlohmann::json::object();
  for (const StageTiming& t : timings) j["timings_ms"][t.stage] = t.milliseconds;
  return j.dump(2);
}

std::string PipelineReport::to_table() const {
  std::ostringstream os;
  os << "verdict        " << (satisfiable ? "sat" : "unsat") << "\n"
     << "fragment       " << fragment_name(fragment.best_fragment)
     << " (ad=" << fragment.alternation_depth << ")\n"
     << "method         " << tracking_method_name(method) << "\n"
     << "closure        " << closure_size << "\n"
     << "apt            " << apt_states << " states, rank " << apt_rank << "\n"
     << "tracking       " << tracking_states << " states\n"
     << "tracker        " << tracker_states << " states\n"
     << "arena          " << arena_nodes << " nodes\n"
     << "game           " << game_nodes << " nodes (" << game_positions
     << " positions), max priority " << game_priorities << "\n";
  for (const StageTiming& t : timings)
    os << "time " << t.stage << std::string(t.stage.size() < 10 ? 10 - t.stage.size() : 1, ' ')
       << t.milliseconds << " ms\n";
  if (witness) os << "witness        " << witness->size() << " worlds\n";
  for (const std::string& w : warnings) os << "warning        " << w << "\n";
  return os.str();
}

}  // namespace musat
