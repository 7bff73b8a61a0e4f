#include "chorefair/divisible.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/generator.hpp"
#include "chorefair/solver.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

namespace {

using namespace chorefair;

// A fixed pool of instances per shape keeps each benchmark iteration on
// realistic, varied inputs while staying reproducible.
std::vector<Instance> instance_pool(int agents, int chores,
                                    std::uint64_t seed_base,
                                    bool subjective = false) {
  std::vector<Instance> pool;
  for (std::uint64_t s = 0; s < 16; ++s) {
    GeneratorConfig config;
    config.seed = seed_base + s;
    config.agents = {agents, agents};
    config.chores = {chores, chores};
    config.subjective = subjective;
    pool.push_back(generate(config));
  }
  return pool;
}

void BM_DensestFirst(benchmark::State& state) {
  const auto pool = instance_pool(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)), 1700);
  std::size_t next = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(densest_first(pool[next]));
    next = (next + 1) % pool.size();
  }
}
BENCHMARK(BM_DensestFirst)->Args({2, 10})->Args({4, 10})->Args({8, 40});

void BM_SolveEfx(benchmark::State& state) {
  const auto pool = instance_pool(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)), 2900);
  std::size_t next = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_efx(pool[next]));
    next = (next + 1) % pool.size();
  }
}
BENCHMARK(BM_SolveEfx)->Args({2, 10})->Args({4, 10})->Args({4, 20});

void BM_SolveDivisible(benchmark::State& state) {
  const auto pool = instance_pool(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)), 4100,
                                  /*subjective=*/true);
  std::size_t next = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_divisible(pool[next]));
    next = (next + 1) % pool.size();
  }
}
BENCHMARK(BM_SolveDivisible)->Args({2, 4})->Args({3, 6});

void BM_VerifyEfx(benchmark::State& state) {
  const auto pool = instance_pool(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)), 5300);
  std::vector<Allocation> allocations;
  allocations.reserve(pool.size());
  for (const auto& instance : pool) {
    allocations.push_back(solve_efx(instance).allocation);
  }
  std::size_t next = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        verify(allocations[next], EnvyCriterion::efx(), pool[next]));
    next = (next + 1) % pool.size();
  }
}
BENCHMARK(BM_VerifyEfx)->Args({2, 10})->Args({4, 20});

}  // namespace

BENCHMARK_MAIN();
