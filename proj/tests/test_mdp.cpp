#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "poisonlab/envs.hpp"
#include "poisonlab/mdp.hpp"

using namespace poisonlab;

namespace {

Mdp two_state_chain() {
  // s0 -> s1 (reward 1), s1 terminal
  Mdp m = Mdp::zeros(2, 1, 0.9);
  m.t_ref(0, 0, 1) = 1.0;
  m.r_ref(0, 0, 1) = 1.0;
  m.t_ref(1, 0, 1) = 1.0;
  m.terminal[1] = 1;
  m.initial_dist[0] = 1.0;
  return m;
}

}  // namespace

TEST_CASE("validate accepts a well-formed MDP") {
  CHECK_FALSE(validate(two_state_chain()).has_value());
}

TEST_CASE("validate reports the first bad transition row") {
  Mdp m = two_state_chain();
  m.t_ref(0, 0, 1) = 0.5;
  m.t_ref(0, 0, 0) = 0.4;
  auto v = validate(m);
  REQUIRE(v.has_value());
  CHECK(v->message == "row sum 0.9 at (0,0)");
}

TEST_CASE("validate rejects gamma = 1 without a horizon") {
  Mdp m = two_state_chain();
  m.gamma = 1.0;
  auto v = validate(m);
  REQUIRE(v.has_value());
  CHECK(v->message == "gamma must be < 1");
  m.horizon = 5;
  CHECK_FALSE(validate(m).has_value());
}

TEST_CASE("validate rejects broken terminals and initial distributions") {
  Mdp m = two_state_chain();
  m.r_ref(1, 0, 1) = 0.5;
  CHECK(validate(m).has_value());

  m = two_state_chain();
  m.t_ref(1, 0, 1) = 0.0;
  m.t_ref(1, 0, 0) = 1.0;
  CHECK(validate(m).has_value());

  m = two_state_chain();
  m.initial_dist = {0.5, 0.4};
  CHECK(validate(m).has_value());
}

TEST_CASE("sample_trajectory walks a deterministic chain in order") {
  Mdp m = Mdp::zeros(3, 1, 0.9);
  m.t_ref(0, 0, 1) = 1.0;
  m.t_ref(1, 0, 2) = 1.0;
  m.t_ref(2, 0, 2) = 1.0;
  m.terminal[2] = 1;
  m.initial_dist[0] = 1.0;
  REQUIRE_FALSE(validate(m).has_value());

  Rng rng(7);
  const auto traj = sample_trajectory(m, PolicyTable::uniform(3, 1), 10, rng);
  REQUIRE(traj.length() == 2);
  CHECK(traj.steps[0].state == 0);
  CHECK(traj.steps[1].state == 1);
  CHECK(traj.final_state == 2);
  CHECK_FALSE(traj.truncated);
}

TEST_CASE("sample_trajectory clamps to the horizon") {
  Mdp m = Mdp::zeros(2, 1, 0.9);
  m.t_ref(0, 0, 1) = 1.0;
  m.t_ref(1, 0, 0) = 1.0;  // ping-pong, no terminal
  m.initial_dist[0] = 1.0;
  Rng rng(3);
  const auto traj = sample_trajectory(m, PolicyTable::uniform(2, 1), 1, rng);
  CHECK(traj.length() == 1);
  CHECK(traj.truncated);
}

TEST_CASE("sample_trajectory is reproducible for a fixed seed") {
  const auto env = make_random_mdp(6, 3, 42, 1.0);
  const auto policy = PolicyTable::uniform(6, 3);
  Rng a(123), b(123);
  const auto t1 = sample_trajectory(env.mdp, policy, 50, a);
  const auto t2 = sample_trajectory(env.mdp, policy, 50, b);
  REQUIRE(t1.length() == t2.length());
  for (int i = 0; i < t1.length(); ++i) {
    CHECK(t1.steps[i].state == t2.steps[i].state);
    CHECK(t1.steps[i].action == t2.steps[i].action);
    CHECK(t1.steps[i].reward == t2.steps[i].reward);
  }
}

TEST_CASE("sample_trajectory rejects undersized policies") {
  const auto env = make_random_mdp(6, 3, 42, 1.0);
  Rng rng(1);
  auto small = PolicyTable::uniform(5, 3);
  CHECK_THROWS_AS(sample_trajectory(env.mdp, small, 10, rng), std::invalid_argument);
}

TEST_CASE("discounted_return matches the worked values") {
  Trajectory traj;
  traj.steps = {{0, 0, 1.0}, {0, 0, 1.0}, {0, 0, 1.0}};
  CHECK(discounted_return(traj, 0.5, 0) == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(discounted_return(traj, 0.5, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(discounted_return(traj, 0.5, 3) == 0.0);
  CHECK_THROWS_AS(discounted_return(traj, 0.5, 4), std::out_of_range);
  CHECK_THROWS_AS(discounted_return(traj, 0.5, -1), std::out_of_range);
}

TEST_CASE("discounted_return decomposes recursively, exactly") {
  Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    Trajectory traj;
    const int len = 1 + rng.uniform_int(30);
    for (int i = 0; i < len; ++i)
      traj.steps.push_back({0, 0, 4.0 * rng.uniform() - 2.0});
    const double gamma = rng.uniform();
    for (int t = 0; t < len; ++t) {
      CHECK(discounted_return(traj, gamma, t) ==
            traj.steps[t].reward + gamma * discounted_return(traj, gamma, t + 1));
    }
  }
}

TEST_CASE("long-run state frequencies match the stationary distribution") {
  // two-state ergodic chain with a single action
  const double p01 = 0.3, p10 = 0.2;
  Mdp m = Mdp::zeros(2, 1, 0.9);
  m.t_ref(0, 0, 0) = 1.0 - p01;
  m.t_ref(0, 0, 1) = p01;
  m.t_ref(1, 0, 0) = p10;
  m.t_ref(1, 0, 1) = 1.0 - p10;
  const double pi1 = p01 / (p01 + p10);
  // starting from the stationary distribution keeps every marginal exact
  m.initial_dist = {1.0 - pi1, pi1};
  REQUIRE_FALSE(validate(m).has_value());

  const auto policy = PolicyTable::uniform(2, 1);
  Rng rng(2718);
  const int n = 10000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const auto traj = sample_trajectory(m, policy, 25, rng);
    if (traj.final_state == 1) ++hits;
  }
  const double freq = static_cast<double>(hits) / n;
  const double se = std::sqrt(pi1 * (1.0 - pi1) / n);
  CHECK(std::abs(freq - pi1) < 3.0 * se);
}

TEST_CASE("every environment constructor produces a valid MDP") {
  CHECK_FALSE(validate(make_m1(1.0).mdp).has_value());
  CHECK_FALSE(validate(make_m1_attack(1.0).mdp).has_value());
  CHECK_FALSE(validate(make_m2(1.0).mdp).has_value());
  CHECK_FALSE(validate(make_chain(5, 1.0).mdp).has_value());
  CHECK_FALSE(validate(make_gridworld(4, 4, 1.0, 0.01, 0.1).mdp).has_value());
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto env = make_random_mdp(2 + seed % 15, 1 + seed % 4, seed, 2.0);
    CHECK_FALSE(validate(env.mdp).has_value());
  }
}
