#include <benchmark/benchmark.h>

#include "poisonlab/envs.hpp"
#include "poisonlab/harness.hpp"
#include "poisonlab/learners.hpp"

using namespace poisonlab;

static Trajectory synthetic_trajectory(int length, int n_benign, Rng& rng) {
  Trajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i)
    traj.steps.push_back({rng.uniform_int(n_benign), rng.uniform_int(2),
                          2.0 * rng.uniform() - 1.0});
  traj.final_state = rng.uniform_int(n_benign);
  traj.truncated = true;
  return traj;
}

static void BM_poison_trajectory(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  Rng gen(3);
  const Trajectory base = synthetic_trajectory(length, 16, gen);
  TriggerScheme scheme{16};
  AttackSpec spec;
  spec.beta = 0.1;
  spec.target_action = 1;
  Rng rng(4);
  for (auto _ : state) {
    Trajectory traj = base;
    benchmark::DoNotOptimize(poison_trajectory_sleepernets(traj, spec, scheme, 0.99, rng));
  }
  state.SetComplexityN(length);
}
BENCHMARK(BM_poison_trajectory)->RangeMultiplier(4)->Range(32, 2048)->Complexity();

static void BM_policy_gradient_update(benchmark::State& state) {
  const int episodes = static_cast<int>(state.range(0));
  Rng gen(5);
  std::vector<Trajectory> batch;
  for (int i = 0; i < episodes; ++i) batch.push_back(synthetic_trajectory(64, 16, gen));
  for (auto _ : state) {
    auto params = SoftmaxPolicyParams::zeros(32, 2);
    policy_gradient_update(params, std::span<const Trajectory>(batch.data(), batch.size()),
                           0.99, 0.1);
    benchmark::DoNotOptimize(params);
  }
}
BENCHMARK(BM_policy_gradient_update)->Arg(1)->Arg(8)->Arg(32);

static void BM_run_training_chain(benchmark::State& state) {
  const auto env = make_chain(5, 1.0, 0.9);
  LearnerConfig lc;
  lc.kind = LearnerKind::policy_gradient;
  lc.learning_rate = 0.3;
  lc.batch_episodes = 1;
  AttackSpec spec;
  spec.mode = AttackMode::sleepernets_outer;
  spec.beta = 0.05;
  spec.target_action = 1;
  spec.accumulate_budget = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_training(env, lc, spec, static_cast<int>(state.range(0)), 100, 50, 10, 1));
  }
}
BENCHMARK(BM_run_training_chain)->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
