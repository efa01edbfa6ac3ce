#include <benchmark/benchmark.h>

#include <random>

#include "musat/game_solver.hpp"

using namespace musat;

namespace {

ParityGame random_game(int nodes, int priorities, unsigned seed) {
  std::mt19937 rng(seed);
  ParityGame g;
  std::uniform_int_distribution<int> prio(priorities == 2 ? 1 : 0,
                                          priorities == 2 ? 2 : priorities - 1);
  std::uniform_int_distribution<int> node(0, nodes - 1);
  for (int v = 0; v < nodes; ++v) g.add_node(rng() % 2 == 0, prio(rng));
  for (int v = 0; v < nodes; ++v) {
    int degree = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < degree; ++i) g.add_edge(v, node(rng));
  }
  return g;
}

void BM_zielonka(benchmark::State& state) {
  ParityGame g = random_game(static_cast<int>(state.range(0)), 6, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_parity(g).winner_box.size());
}
BENCHMARK(BM_zielonka)->Arg(100)->Arg(1000)->Arg(10000);

void BM_buchi_solver(benchmark::State& state) {
  ParityGame g = random_game(static_cast<int>(state.range(0)), 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_buchi(g).winner_box.size());
}
BENCHMARK(BM_buchi_solver)->Arg(100)->Arg(1000)->Arg(10000);

void BM_buchi_as_parity(benchmark::State& state) {
  ParityGame g = random_game(static_cast<int>(state.range(0)), 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_parity(g).winner_box.size());
}
BENCHMARK(BM_buchi_as_parity)->Arg(100)->Arg(1000);

}  // namespace
