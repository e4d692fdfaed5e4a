#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "poisonlab/envs.hpp"
#include "poisonlab/harness.hpp"
#include "poisonlab/metrics.hpp"

using namespace poisonlab;

namespace {

// two benign states that alternate deterministically under one action
EnvDescriptor alternator() {
  Mdp m = Mdp::zeros(2, 4, 0.9);
  for (int a = 0; a < 4; ++a) {
    m.t_ref(0, a, 1) = 1.0;
    m.t_ref(1, a, 0) = 1.0;
  }
  m.initial_dist[0] = 1.0;
  return EnvDescriptor{"alternator", m, TriggerScheme{2}, ""};
}

}  // namespace

TEST_CASE("a uniform policy scores exactly 1/|A|") {
  const auto env = alternator();
  const auto policy = PolicyTable::uniform(4, 4);
  Rng rng(1);
  CHECK(attack_success_rate(policy, env, 2, 5, 20, rng) == 0.25);
}

TEST_CASE("a fully backdoored policy scores exactly 1") {
  const auto env = make_chain(4, 1.0, 0.9);
  auto policy = PolicyTable::uniform(8, 2);
  for (int sp = 4; sp < 8; ++sp) {
    policy.at(sp, 0) = 0.0;
    policy.at(sp, 1) = 1.0;
  }
  Rng rng(2);
  CHECK(attack_success_rate(policy, env, 1, 10, 50, rng) == 1.0);
}

TEST_CASE("triggered probabilities average over state occurrences") {
  const auto env = alternator();
  auto policy = PolicyTable::uniform(4, 4);
  policy.at(2, 0) = 0.2;
  policy.at(2, 1) = 0.8;
  policy.at(2, 2) = 0.0;
  policy.at(2, 3) = 0.0;
  policy.at(3, 0) = 0.8;
  policy.at(3, 1) = 0.2;
  policy.at(3, 2) = 0.0;
  policy.at(3, 3) = 0.0;
  Rng rng(3);
  // even-length episodes visit both states equally, so the mean is exact
  CHECK(attack_success_rate(policy, env, 0, 7, 20, rng) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("the success rate ignores reward values") {
  auto env = make_chain(4, 1.0, 0.9);
  auto policy = PolicyTable::uniform(8, 2);
  Rng rng_a(4);
  const double before = attack_success_rate(policy, env, 1, 10, 50, rng_a);
  for (auto& r : env.mdp.reward) r *= 100.0;
  Rng rng_b(4);
  const double after = attack_success_rate(policy, env, 1, 10, 50, rng_b);
  CHECK(before == after);
}

TEST_CASE("benign return ratio follows the positive-baseline ratio") {
  CHECK(benign_return_ratio(5.0, 5.0, 0.1) == 1.0);
  CHECK(benign_return_ratio(4.85, 5.0, 0.1) == doctest::Approx(0.97).epsilon(1e-12));
  CHECK(benign_return_ratio(6.0, 5.0, 0.1) == 1.0);
}

TEST_CASE("benign return ratio is monotone and capped") {
  double prev = 0.0;
  for (double poisoned = 0.0; poisoned <= 12.0; poisoned += 0.5) {
    const double r = benign_return_ratio(poisoned, 6.0, 0.2);
    CHECK(r >= prev);
    CHECK(r <= 1.0);
    prev = r;
  }
}

TEST_CASE("non-positive baselines use the standardized fallback") {
  const double r = benign_return_ratio(-1.0, -0.5, 0.25);
  CHECK(r == doctest::Approx(std::exp((-1.0 + 0.5) / 0.25)).epsilon(1e-12));
  CHECK(benign_return_ratio(3.0, -0.5, 0.25) == 1.0);
  CHECK_THROWS_AS(benign_return_ratio(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("evaluate_policy bundles the metrics of a trained policy") {
  const auto env = make_chain(4, 1.0, 0.9);
  LearnerConfig lc;
  lc.kind = LearnerKind::policy_gradient;
  lc.learning_rate = 0.3;
  lc.batch_episodes = 1;
  AttackSpec spec;
  spec.mode = AttackMode::sleepernets_outer;
  spec.beta = 0.1;
  spec.target_action = 1;
  spec.accumulate_budget = true;
  const auto trained = run_training(env, lc, spec, 500, 50, 50, 10, 4);

  Rng rng(8);
  const auto report = evaluate_policy(trained.policy, env, 1, 20, 50, 0.729, 0.01,
                                      trained.log, rng);
  CHECK(report.asr >= 0.0);
  CHECK(report.asr <= 1.0);
  CHECK(report.brr >= 0.0);
  CHECK(report.brr <= 1.0);
  CHECK(report.poison_rate == empirical_poison_rate(trained.log));
  CHECK(report.episodes_evaluated == 20);
  // a trained chain policy walks straight to the goal
  CHECK(report.mean_benign_return == doctest::Approx(0.729).epsilon(0.05));
}

TEST_CASE("empirical poison rate is the poisoned-step fraction") {
  RunLog log;
  log.episodes.push_back({0, 0.0, 0, 0.0, 0.0});
  log.total_steps = 50;
  log.total_poisoned = 0;
  CHECK(empirical_poison_rate(log) == 0.0);
  log.total_poisoned = 50;
  CHECK(empirical_poison_rate(log) == 1.0);
  log.total_poisoned = 5;
  CHECK(empirical_poison_rate(log) == doctest::Approx(0.1).epsilon(1e-15));
  RunLog empty;
  CHECK_THROWS_AS(empirical_poison_rate(empty), std::invalid_argument);
}
