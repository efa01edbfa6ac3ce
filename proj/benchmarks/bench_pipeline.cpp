#include <benchmark/benchmark.h>

#include <string>

#include "musat/pipeline.hpp"

using namespace musat;

namespace {

// A family of nested always/eventually properties; depth scales the closure.
std::string layered_formula(int depth) {
  std::string f = "mu X0. (p | <>X0)";
  for (int i = 1; i <= depth; ++i) {
    std::string var = "Y" + std::to_string(i);
    f = "nu " + var + ". (([]" + var + ") & (" + f + "))";
  }
  return f;
}

void BM_decide_sat_layered(benchmark::State& state) {
  Formula f = parse_formula(layered_formula(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    PipelineOptions options;
    options.want_witness = false;
    benchmark::DoNotOptimize(decide_sat(f, options).satisfiable);
  }
}
BENCHMARK(BM_decide_sat_layered)->DenseRange(1, 4);

void BM_decide_sat_alternating(benchmark::State& state) {
  Formula f = parse_formula("nu X. mu Y. ((p & <>X) | <>Y)");
  for (auto _ : state) {
    PipelineOptions options;
    options.want_witness = false;
    benchmark::DoNotOptimize(decide_sat(f, options).satisfiable);
  }
}
BENCHMARK(BM_decide_sat_alternating);

void BM_extract_witness(benchmark::State& state) {
  Formula f = parse_formula(layered_formula(2));
  for (auto _ : state) {
    PipelineReport r = decide_sat(f);
    benchmark::DoNotOptimize(r.witness->size());
  }
}
BENCHMARK(BM_extract_witness);

void BM_model_check(benchmark::State& state) {
  Formula f = parse_formula("nu X. (mu Y. (p | <>Y)) & []X");
  KripkeStructure k = kripke_from_json(R"({
    "worlds": [{"id":"a","atoms":["p"]},{"id":"b"},{"id":"c","atoms":["p","q"]},
               {"id":"d"},{"id":"e","atoms":["q"]}],
    "initial": "a",
    "edges": [["a","b"],["b","c"],["c","d"],["d","e"],["e","a"],["b","a"],["d","c"]]})");
  for (auto _ : state) benchmark::DoNotOptimize(model_check(f, k));
}
BENCHMARK(BM_model_check);

}  // namespace
