#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "poisonlab/dp.hpp"
#include "poisonlab/envs.hpp"
#include "poisonlab/poison.hpp"

using namespace poisonlab;

TEST_CASE("trigger application is an offset bijection") {
  TriggerScheme scheme{4};
  CHECK(apply_trigger(scheme, 2) == 6);
  for (int s = 0; s < 4; ++s) CHECK(invert_trigger(scheme, apply_trigger(scheme, s)) == s);
  CHECK_THROWS_AS(apply_trigger(scheme, 5), std::out_of_range);
  CHECK_THROWS_AS(apply_trigger(scheme, -1), std::out_of_range);
  CHECK_THROWS_AS(invert_trigger(scheme, 3), std::out_of_range);
}

TEST_CASE("poisoned transitions reduce to the benign MDP at zero budget") {
  const auto env = make_random_mdp(4, 2, 10, 1.0);
  AttackSpec spec;
  spec.beta = 0.0;
  const auto pm = make_poisoned_mdp(env.mdp, env.scheme, spec);
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < 2; ++a)
      for (int s2 = 0; s2 < 4; ++s2) {
        CHECK(poisoned_transition(pm, s, a, s2) == env.mdp.t(s, a, s2));
        CHECK(poisoned_transition(pm, s, a, s2 + 4) == 0.0);
      }
}

TEST_CASE("poisoned transitions split deterministic moves by the budget") {
  Mdp m = Mdp::zeros(2, 1, 0.9);
  m.t_ref(0, 0, 1) = 1.0;
  m.t_ref(1, 0, 1) = 1.0;
  m.terminal[1] = 1;
  m.initial_dist[0] = 1.0;
  AttackSpec spec;
  spec.beta = 0.5;
  const auto pm = make_poisoned_mdp(m, TriggerScheme{2}, spec);
  CHECK(poisoned_transition(pm, 0, 0, 1) == 0.5);
  CHECK(poisoned_transition(pm, 0, 0, 3) == 0.5);
  CHECK(poisoned_transition(pm, 2, 0, 1) == 0.5);
  CHECK(poisoned_transition(pm, 2, 0, 3) == 0.5);
}

TEST_CASE("poisoned transition rows sum to one for every budget") {
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + rep % 7;
    const auto env = make_random_mdp(n, 2 + rep % 3, 100 + rep, 1.0);
    for (const double beta : {0.0, 0.1, 0.37, 0.5, 0.9, 0.99}) {
      AttackSpec spec;
      spec.beta = beta;
      const auto pm = make_poisoned_mdp(env.mdp, env.scheme, spec);
      for (int s = 0; s < 2 * n; ++s)
        for (int a = 0; a < env.mdp.n_actions; ++a) {
          double sum = 0.0;
          for (int s2 = 0; s2 < 2 * n; ++s2) sum += poisoned_transition(pm, s, a, s2);
          CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
  }
}

TEST_CASE("static poisoned reward is the signed constant") {
  AttackSpec spec;
  spec.c = 40.0;
  spec.target_action = 2;
  CHECK(static_poisoned_reward(spec, 2) == 40.0);
  CHECK(static_poisoned_reward(spec, 0) == -40.0);
  spec.c = 0.0;
  CHECK(static_poisoned_reward(spec, 2) == 0.0);
  CHECK(static_poisoned_reward(spec, 1) == 0.0);
}

TEST_CASE("dynamic poisoned reward follows its three branches") {
  const auto env = make_chain(3, 1.0, 0.9);
  AttackSpec spec;
  spec.beta = 0.5;
  spec.target_action = 0;
  const auto pm = make_poisoned_mdp(env.mdp, env.scheme, spec);
  std::vector<double> values(6, 0.0);

  // triggered source, target action, zero-valued successor
  CHECK(dynamic_poisoned_reward(pm, 3, 0, 2, values) == 1.0);

  // triggered source, non-target action, valued successor
  values[2] = 0.5;
  CHECK(dynamic_poisoned_reward(pm, 3, 1, 2, values) ==
        doctest::Approx(-0.45).epsilon(1e-15));

  // benign-to-benign ignores the value table entirely
  const double r1 = dynamic_poisoned_reward(pm, 1, 0, 2, values);
  values[2] = -3.0;
  values[5] = 7.0;
  const double r2 = dynamic_poisoned_reward(pm, 1, 0, 2, values);
  CHECK(r1 == env.mdp.r(1, 0, 2));
  CHECK(r1 == r2);

  // benign-to-triggered compensates both successor values
  const double expected = env.mdp.r(1, 0, 2) - 0.9 * values[5] + 0.9 * values[2];
  CHECK(dynamic_poisoned_reward(pm, 1, 0, 5, values) ==
        doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("static materialization validates and keeps terminal copies absorbing") {
  const auto env = make_chain(4, 1.0, 0.9);
  AttackSpec spec;
  spec.beta = 0.3;
  spec.c = 2.0;
  spec.target_action = 1;
  const Mdp poisoned = build_static_poisoned_mdp(env.mdp, env.scheme, spec);
  CHECK_FALSE(validate(poisoned).has_value());
  CHECK(poisoned.n_states == 8);
  CHECK(poisoned.is_terminal(3));
  CHECK(poisoned.is_terminal(7));
  // non-terminal poisoned source rows pay the signed constant everywhere
  for (int s2 = 0; s2 < 8; ++s2) {
    if (poisoned.t(4, 0, s2) > 0.0) CHECK(poisoned.r(4, 0, s2) == -2.0);
    if (poisoned.t(4, 1, s2) > 0.0) CHECK(poisoned.r(4, 1, s2) == 2.0);
  }
}

TEST_CASE("zero budget static materialization keeps the benign optimum") {
  const auto env = make_chain(5, 1.0, 0.9);
  AttackSpec spec;
  spec.beta = 0.0;
  spec.c = 3.0;
  spec.target_action = 1;
  const Mdp poisoned = build_static_poisoned_mdp(env.mdp, env.scheme, spec);
  const auto vi_benign = value_iteration(env.mdp, 1e-10);
  const auto vi_poisoned = value_iteration(poisoned, 1e-10);
  for (int s = 0; s < env.mdp.n_states; ++s)
    for (int a = 0; a < env.mdp.n_actions; ++a)
      CHECK(vi_benign.policy.at(s, a) == vi_poisoned.policy.at(s, a));
}

TEST_CASE("vanishing reward constant leaves the benign-state policy of structured tasks") {
  AttackSpec spec;
  spec.c = 0.0;
  spec.target_action = 1;
  for (const double beta : {0.1, 0.3, 0.6}) {
    spec.beta = beta;
    for (const auto& env :
         {make_chain(5, 1.0, 0.9), make_m2(1.0, 0.9), make_gridworld(3, 3, 1.0, 0.0, 0.0)}) {
      const Mdp poisoned = build_static_poisoned_mdp(env.mdp, env.scheme, spec);
      const auto vi_benign = value_iteration(env.mdp, 1e-10);
      const auto vi_poisoned = value_iteration(poisoned, 1e-10);
      for (int s = 0; s < env.mdp.n_states; ++s) {
        if (env.mdp.is_terminal(s)) continue;
        for (int a = 0; a < env.mdp.n_actions; ++a)
          CHECK(vi_benign.policy.at(s, a) == vi_poisoned.policy.at(s, a));
      }
    }
  }
}

TEST_CASE("make_poisoned_mdp validates its inputs") {
  const auto env = make_chain(3, 1.0, 0.9);
  AttackSpec spec;
  spec.beta = 1.5;
  CHECK_THROWS_AS(make_poisoned_mdp(env.mdp, env.scheme, spec), std::invalid_argument);
  spec.beta = 0.5;
  spec.target_action = 7;
  CHECK_THROWS_AS(make_poisoned_mdp(env.mdp, env.scheme, spec), std::invalid_argument);
  spec.target_action = 0;
  CHECK_THROWS_AS(make_poisoned_mdp(env.mdp, TriggerScheme{5}, spec), std::invalid_argument);
}
