#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "poisonlab/dp.hpp"
#include "poisonlab/envs.hpp"

using namespace poisonlab;

TEST_CASE("survival counterexample: low discounts keep the target action optimal") {
  auto env = make_m1(1.0, 0.1);
  AttackSpec spec;
  spec.beta = 1.0;
  spec.c = 1.0;
  spec.target_action = 0;
  const Mdp poisoned = build_static_poisoned_mdp(env.mdp, env.scheme, spec);
  const auto vi = value_iteration(poisoned, 1e-12);
  const auto q = q_from_values(poisoned, vi.values);
  CHECK(q.at(3, 0) > q.at(3, 1));
}

TEST_CASE("survival counterexample: dynamic poisoning keeps the target optimal") {
  for (const double gamma : {0.1, 0.9}) {
    auto env = make_m1(1.0, gamma);
    AttackSpec spec;
    spec.beta = 0.3;
    spec.target_action = 0;
    const auto pm = make_poisoned_mdp(env.mdp, env.scheme, spec);
    const auto winner = brute_force_optimal(pm);
    CHECK(winner.policy.at(3, 0) == 1.0);  // triggered Start
    CHECK(winner.policy.at(4, 0) == 1.0);  // triggered Survive
  }
}

TEST_CASE("two-path counterexample: the fast path is benign-optimal") {
  for (const double gamma : {0.1, 0.5, 0.9}) {
    auto env = make_m2(1.0, gamma);
    const auto vi = value_iteration(env.mdp, 1e-10);
    CHECK(vi.policy.at(0, 0) == 1.0);
  }
}

TEST_CASE("two-path counterexample: printed closed forms at beta 0.5, gamma 0.9") {
  const double gamma = 0.9, beta = 0.5, c = 1.0;
  const double slow = gamma * beta * c + gamma * gamma * beta * c + gamma * gamma * gamma * c;
  const double fast = gamma * beta * c + gamma * gamma * c;
  CHECK(slow == doctest::Approx(1.584).epsilon(1e-12));
  CHECK(fast == doctest::Approx(1.26).epsilon(1e-12));
  CHECK(slow > fast);
}

TEST_CASE("two-path counterexample: dynamic poisoning preserves the fast path") {
  auto env = make_m2(1.0, 0.9);
  AttackSpec spec;
  spec.beta = 0.5;
  spec.target_action = 0;
  const auto pm = make_poisoned_mdp(env.mdp, env.scheme, spec);
  const auto winner = brute_force_optimal(pm);
  CHECK(winner.policy.at(0, 0) == 1.0);
}

TEST_CASE("gridworld: one step to the goal is worth gamma") {
  const auto env = make_gridworld(1, 2, 1.0, 0.0, 0.0, 0.9);
  const auto vi = value_iteration(env.mdp, 1e-10);
  CHECK(vi.values.at(0) == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("gridworld: slip-free optimal play follows shortest paths") {
  const auto env = make_gridworld(4, 3, 1.0, 0.0, 0.0, 0.9);
  const auto vi = value_iteration(env.mdp, 1e-10);
  const int goal = 4 * 3 - 1;
  const auto dist = test::bfs_distances(env.mdp, 0);
  // walk the greedy policy from the start; it must reach the goal in
  // exactly the breadth-first distance
  int s = 0, steps = 0;
  while (s != goal && steps < 64) {
    int a = 0;
    for (int k = 0; k < 4; ++k)
      if (vi.policy.at(s, k) == 1.0) a = k;
    for (int s2 = 0; s2 < env.mdp.n_states; ++s2)
      if (env.mdp.t(s, a, s2) == 1.0) {
        s = s2;
        break;
      }
    ++steps;
  }
  CHECK(s == goal);
  CHECK(steps == dist[static_cast<std::size_t>(goal)]);
}

TEST_CASE("gridworld: a 5x5 grid with slip validates") {
  const auto env = make_gridworld(5, 5, 1.0, 0.05, 0.2);
  CHECK_FALSE(validate(env.mdp).has_value());
  CHECK(env.mdp.n_states == 26);
}

TEST_CASE("gridworld rejects bad shapes and slip values") {
  CHECK_THROWS_AS(make_gridworld(9, 9, 1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_gridworld(4, 4, 1.0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("chain: a two-state chain pays the forward reward immediately") {
  const auto env = make_chain(2, 0.7, 0.9);
  const auto vi = value_iteration(env.mdp, 1e-10);
  CHECK(vi.values.at(0) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("chain: five states discount the forward reward three times") {
  const auto env = make_chain(5, 1.0, 0.9);
  const auto vi = value_iteration(env.mdp, 1e-10);
  CHECK(vi.values.at(0) == doctest::Approx(std::pow(0.9, 3)).epsilon(1e-9));
  // against a direct backward-induction oracle at a horizon long enough
  // to be indistinguishable from the fixed point
  const double reference = test::backward_induction_optimal(env.mdp, 0, 300);
  CHECK(vi.values.at(0) == doctest::Approx(reference).epsilon(1e-9));
}

TEST_CASE("chain: back at the first state self-loops and rows are stochastic") {
  const auto env = make_chain(4, 1.0, 0.9);
  CHECK(env.mdp.t(0, 1, 0) == 1.0);
  CHECK_FALSE(validate(env.mdp).has_value());
}

TEST_CASE("random MDPs are reproducible per seed") {
  const auto a = make_random_mdp(7, 3, 99, 1.0);
  const auto b = make_random_mdp(7, 3, 99, 1.0);
  CHECK(a.mdp.transition == b.mdp.transition);
  CHECK(a.mdp.reward == b.mdp.reward);
  const auto c = make_random_mdp(7, 3, 100, 1.0);
  CHECK(a.mdp.transition != c.mdp.transition);
}

TEST_CASE("environment descriptors pair the MDP with a matching trigger scheme") {
  for (const auto& env : {make_m1(1.0), make_m2(1.0), make_chain(6, 1.0),
                          make_gridworld(3, 3, 1.0, 0.0, 0.1), make_random_mdp(5, 2, 3, 1.0)}) {
    CHECK(env.scheme.n_benign == env.mdp.n_states);
  }
}
