#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "musat/pipeline.hpp"

namespace musat::cli {

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw MusatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Formula parse_file(const std::string& path) {
  return parse_formula(read_input(path));
}

std::optional<TrackingMethod> method_of(const std::string& name) {
  if (name == "auto") return std::nullopt;
  if (name == "circle") return TrackingMethod::Circle;
  if (name == "mh") return TrackingMethod::MiyanoHayashi;
  if (name == "focus") return TrackingMethod::Focus;
  if (name == "perm") return TrackingMethod::Permutation;
  throw MusatError("--fragment expects auto|circle|mh|focus|perm");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw MusatError("cannot write '" + path + "'");
  out << content;
}

struct DumpPack {
  Apt apt;
  StrategyArena arena;
  WordAutomaton tracking;
};

DumpPack build_dump_pack(Formula f) {
  CleanResult clean = make_clean(f);
  if (!check_guarded(clean.formula))
    throw MusatError("unguarded formula: every fixpoint variable needs a modal "
                     "operator between binder and use");
  ClosureTable table = alternation(clean.formula, closure(clean.formula));
  DumpPack p;
  p.apt = formula_to_apt(clean.formula, table);
  p.arena = build_arena(p.apt);
  p.tracking = build_tracking(p.apt, p.arena);
  return p;
}

void dump_all(const PipelineOptions& popts, Formula f, const std::string& dir,
              std::ostream& err) {
  std::filesystem::create_directories(dir);
  DumpPack p = build_dump_pack(f);
  write_file(dir + "/apt.dot", apt_to_dot(p.apt));
  write_file(dir + "/arena.dot", arena_to_dot(p.arena, p.apt));
  write_file(dir + "/tracking.dot", word_automaton_to_dot(p.tracking));
  try {
    PipelineOptions q = popts;
    q.want_witness = false;
    PipelineReport r = decide_sat(f, q);
    // Rebuild the dispatched tracker so the dumped game matches the run.
    if (r.method == TrackingMethod::Unsupported) return;
    WordAutomaton tracker = build_method_tracker(r.method, p.tracking);
    ProductGame game = build_product_game(p.arena, tracker);
    write_file(dir + "/game.dot", parity_game_to_dot(game.game));
    write_file(dir + "/game.pg", parity_game_to_pgsolver(game.game));
  } catch (const UnsupportedFragmentError& e) {
    err << "note: no game dump, " << e.what() << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mu-calculus satisfiability via tree automata emptiness games"};
  app.require_subcommand(1);

  // sat
  std::string sat_file, fragment = "auto", witness_out, stats = "table", dump_dir;
  CLI::App* sat = app.add_subcommand("sat", "decide satisfiability of a formula");
  sat->add_option("file", sat_file, "formula file, or - for stdin")->required();
  sat->add_option("--fragment", fragment, "auto|circle|mh|focus|perm")
      ->default_val("auto")
      ->check(CLI::IsMember({"auto", "circle", "mh", "focus", "perm"}));
  sat->add_option("--witness", witness_out, "write the witness structure (JSON)");
  sat->add_option("--stats", stats, "json|table")->default_val("table");
  sat->add_option("--dump-dot", dump_dir, "write DOT dumps into this directory");

  // classify
  std::string classify_file;
  CLI::App* cls = app.add_subcommand("classify", "report the syntactic fragment");
  cls->add_option("file", classify_file, "formula file, or - for stdin")->required();

  // mc
  std::string mc_formula, mc_kripke;
  CLI::App* mc = app.add_subcommand("mc", "model-check a formula on a structure");
  mc->add_option("formula", mc_formula, "formula file, or - for stdin")->required();
  mc->add_option("kripke", mc_kripke, "structure file (JSON)")->required();

  // dump
  std::string dump_what, dump_file;
  CLI::App* dmp = app.add_subcommand("dump", "print an intermediate object as DOT");
  dmp->add_option("what", dump_what, "apt|tracking|arena|game")->required();
  dmp->add_option("file", dump_file, "formula file, or - for stdin")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sat->parsed()) {
      PipelineOptions popts;
      popts.force_method = method_of(fragment);
      Formula f = parse_file(sat_file);
      if (!dump_dir.empty()) dump_all(popts, f, dump_dir, err);
      PipelineReport report = decide_sat(f, popts);
      out << (stats == "json" ? report.to_json() : report.to_table()) << "\n";
      if (report.witness && !witness_out.empty()) {
        write_file(witness_out, kripke_to_json(*report.witness));
        out << "witness written to " << witness_out << "\n";
      }
      return report.satisfiable ? 0 : 1;
    }
    if (cls->parsed()) {
      Formula f = parse_file(classify_file);
      CleanResult clean = make_clean(f);
      ClosureTable table = alternation(clean.formula, closure(clean.formula));
      FragmentReport fr = classify_fragment(clean.formula, table);
      out << fragment_name(fr.best_fragment) << "\n";
      out << "alternation depth " << fr.alternation_depth
          << ", guarded " << (check_guarded(clean.formula) ? "yes" : "no")
          << ", closure " << table.size() << "\n";
      return 0;
    }
    if (mc->parsed()) {
      Formula f = parse_file(mc_formula);
      KripkeStructure k = kripke_from_json(read_input(mc_kripke));
      ModelCheckReport r = model_check_report(f, k);
      out << (r.holds ? "true" : "false") << " (game " << r.game_nodes
          << " nodes, max priority " << r.game_priorities << ")\n";
      return r.holds ? 0 : 1;
    }
    if (dmp->parsed()) {
      Formula f = parse_file(dump_file);
      DumpPack p = build_dump_pack(f);
      if (dump_what == "apt") out << apt_to_dot(p.apt);
      else if (dump_what == "arena") out << arena_to_dot(p.arena, p.apt);
      else if (dump_what == "tracking") out << word_automaton_to_dot(p.tracking);
      else if (dump_what == "game") {
        PipelineReport r = decide_sat(f, PipelineOptions{std::nullopt, false, kDefaultAtomCap});
        if (r.method == TrackingMethod::Unsupported)
          throw MusatError("no game for unsupported fragment");
        WordAutomaton tracker = build_method_tracker(r.method, p.tracking);
        out << parity_game_to_dot(build_product_game(p.arena, tracker).game);
      } else {
        err << "error: dump expects apt|tracking|arena|game\n";
        return 2;
      }
      return 0;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedFragmentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const MusatError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace musat::cli
