#include <benchmark/benchmark.h>

#include "poisonlab/dp.hpp"
#include "poisonlab/envs.hpp"
#include "poisonlab/verify.hpp"

using namespace poisonlab;

static void BM_policy_evaluation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto env = make_random_mdp(n, 4, 7, 1.0, 0.95);
  Rng rng(1);
  const auto policy = random_stochastic_policy(n, 4, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(policy_evaluation(env.mdp, policy, 1e-10));
  }
}
BENCHMARK(BM_policy_evaluation)->Arg(4)->Arg(8)->Arg(16);

static void BM_value_iteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto env = make_random_mdp(n, 4, 7, 1.0, 0.95);
  for (auto _ : state) {
    benchmark::DoNotOptimize(value_iteration(env.mdp, 1e-10));
  }
}
BENCHMARK(BM_value_iteration)->Arg(4)->Arg(8)->Arg(16);

static void BM_poisoned_policy_evaluation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto env = make_random_mdp(n, 4, 7, 1.0, 0.95);
  AttackSpec spec;
  spec.beta = 0.3;
  spec.target_action = 1;
  const auto pm = make_poisoned_mdp(env.mdp, env.scheme, spec);
  Rng rng(2);
  const auto policy = random_stochastic_policy(2 * n, 4, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(poisoned_policy_evaluation(pm, policy, 1e-10));
  }
}
BENCHMARK(BM_poisoned_policy_evaluation)->Arg(4)->Arg(8)->Arg(16);

static void BM_brute_force_optimal(benchmark::State& state) {
  const auto env = make_random_mdp(static_cast<int>(state.range(0)), 2, 7, 1.0, 0.9);
  AttackSpec spec;
  spec.beta = 0.3;
  spec.target_action = 1;
  const auto pm = make_poisoned_mdp(env.mdp, env.scheme, spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_optimal(pm));
  }
}
BENCHMARK(BM_brute_force_optimal)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
