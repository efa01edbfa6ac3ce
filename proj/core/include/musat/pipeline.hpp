// End-to-end satisfiability and model checking: fragment dispatch onto the
// four tracking transformations, product game solving, witness extraction,
// and per-stage statistics.

#ifndef MUSAT_PIPELINE_HPP
#define MUSAT_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "musat/closure.hpp"
#include "musat/determinization.hpp"
#include "musat/emptiness_game.hpp"
#include "musat/formula.hpp"
#include "musat/game_solver.hpp"
#include "musat/kripke.hpp"
#include "musat/tree_automaton.hpp"

namespace musat {

struct UnsupportedFragmentError : MusatError {
  using MusatError::MusatError;
};

enum class TrackingMethod { Circle, MiyanoHayashi, Focus, Permutation, Unsupported };
const char* tracking_method_name(TrackingMethod m);

struct PipelineOptions {
  // Empty = dispatch on the most specific fragment; forcing a method whose
  // structural precondition fails raises an error.
  std::optional<TrackingMethod> force_method;
  bool want_witness = true;
  int atom_cap = kDefaultAtomCap;
};

struct StageTiming {
  std::string stage;
  double milliseconds = 0;
};

struct PipelineReport {
  Formula formula;                   // after cleaning
  std::vector<std::string> warnings; // binder renamings
  FragmentReport fragment;
  TrackingMethod method = TrackingMethod::Unsupported;
  bool satisfiable = false;

  // Stage sizes; the per-stage bounds are re-checked during construction.
  std::size_t closure_size = 0;
  std::size_t apt_states = 0;
  int apt_rank = 0;
  std::size_t tracking_states = 0;
  std::size_t tracker_states = 0;   // H, after (history-)determinization
  std::size_t arena_nodes = 0;
  std::size_t game_nodes = 0;
  std::size_t game_positions = 0;
  int game_priorities = 0;

  std::optional<KripkeStructure> witness;  // verified against the semantics
  std::vector<StageTiming> timings;

  std::string to_json() const;
  std::string to_table() const;
};

// Decides satisfiability of a closed formula.  Unclean input is renamed (a
// warning is recorded); unguarded input is rejected.  Satisfiable verdicts
// carry a witness structure verified by the fixpoint semantics whenever one
// was requested; when the dispatched tracker is only history-deterministic
// the witness is re-extracted through the breakpoint determinization.
PipelineReport decide_sat(Formula f, const PipelineOptions& options = {});

// The (history-)determinized tracker a method runs on: circle, breakpoint
// and focus methods on the co-Buchi reading of a weak tracking automaton,
// the permutation method on the pruned priority-eliminated one.  Throws
// (UnsupportedFragmentError for the permutation path) when the structural
// precondition fails.
WordAutomaton build_method_tracker(TrackingMethod method, const WordAutomaton& tracking);

// Witness structure induced by player diamond's winning strategy: worlds are
// the strategy-reachable modal positions of the product, edges follow the
// box choices, labels read off the letter component.  Requires a
// deterministic tracker and a winning initial node.
KripkeStructure extract_model(const Solution& solution, const ProductGame& product,
                              const StrategyArena& arena, const Apt& apt,
                              const WordAutomaton& tracker);

struct ModelCheckReport {
  bool holds = false;
  std::size_t game_nodes = 0;
  int game_priorities = 0;
};

// Game-based model checking via the acceptance game (|W| * |Q| nodes).
ModelCheckReport model_check_report(Formula f, const KripkeStructure& k);
bool model_check(Formula f, const KripkeStructure& k);

}  // namespace musat

#endif  // MUSAT_PIPELINE_HPP
