#include <benchmark/benchmark.h>

#include <random>

#include "musat/determinization.hpp"

using namespace musat;

namespace {

// Random co-Buchi automaton, deterministically seeded per size.
WordAutomaton ncw(int states, unsigned seed) {
  std::mt19937 rng(seed);
  WordAutomaton a;
  a.flavor = AcceptanceFlavor::CoBuchi;
  a.letter_names = {"a", "b"};
  for (int q = 0; q < states; ++q) a.add_state(q % 3 == 0 ? 0 : 1);
  a.initial = 0;
  std::uniform_int_distribution<int> pick(0, states - 1);
  for (int q = 0; q < states; ++q)
    for (int l = 0; l < 2; ++l) {
      int degree = 1 + static_cast<int>(rng() % 2);
      for (int i = 0; i < degree; ++i) a.add_edge(q, l, pick(rng));
    }
  return a;
}

// Limit-deterministic Buchi automaton with a deterministic half.
WordAutomaton ldbw(int states, unsigned seed) {
  std::mt19937 rng(seed);
  WordAutomaton a;
  a.flavor = AcceptanceFlavor::Buchi;
  a.letter_names = {"a", "b"};
  int det = states / 2;
  int nondet = states - det;
  for (int q = 0; q < states; ++q)
    a.add_state(q >= nondet && q % 2 == 0 ? 2 : 1);
  a.initial = 0;
  std::uniform_int_distribution<int> any(0, states - 1);
  std::uniform_int_distribution<int> det_pick(nondet, states - 1);
  for (int q = 0; q < nondet; ++q)
    for (int l = 0; l < 2; ++l) {
      a.add_edge(q, l, any(rng));
      if (rng() % 2) a.add_edge(q, l, any(rng));
    }
  for (int q = nondet; q < states; ++q)
    for (int l = 0; l < 2; ++l)
      if (rng() % 4) a.add_edge(q, l, det_pick(rng));
  return a;
}

void BM_miyano_hayashi(benchmark::State& state) {
  WordAutomaton a = ncw(static_cast<int>(state.range(0)), 42);
  for (auto _ : state) benchmark::DoNotOptimize(miyano_hayashi(a).state_count());
}
BENCHMARK(BM_miyano_hayashi)->Arg(8)->Arg(10)->Arg(12);

void BM_focus(benchmark::State& state) {
  // Thin accepting rows until the input is limit-deterministic.
  WordAutomaton a = ncw(static_cast<int>(state.range(0)), 7);
  for (int q = 0; q < a.state_count(); ++q) {
    if (!a.accepting_state(q)) continue;
    for (auto& cell : a.delta[static_cast<std::size_t>(q)]) {
      int kept = -1;
      std::vector<int> next;
      for (int w : cell) {
        if (!a.accepting_state(w)) next.push_back(w);
        else if (kept < 0) { kept = w; next.push_back(w); }
      }
      cell = next;
    }
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(focus_history_determinize(a).state_count());
}
BENCHMARK(BM_focus)->Arg(8)->Arg(10)->Arg(12);

void BM_permutation(benchmark::State& state) {
  WordAutomaton a = ldbw(static_cast<int>(state.range(0)), 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(permutation_determinize(a).state_count());
}
BENCHMARK(BM_permutation)->Arg(8)->Arg(10)->Arg(12);

void BM_parity_to_buchi(benchmark::State& state) {
  WordAutomaton a = ncw(static_cast<int>(state.range(0)), 99);
  a.flavor = AcceptanceFlavor::Parity;
  for (int q = 0; q < a.state_count(); ++q)
    a.priority[static_cast<std::size_t>(q)] = q % 5;
  for (auto _ : state) benchmark::DoNotOptimize(parity_to_buchi(a).state_count());
}
BENCHMARK(BM_parity_to_buchi)->Arg(16)->Arg(64);

}  // namespace
