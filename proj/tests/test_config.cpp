#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "poisonlab/config.hpp"

using namespace poisonlab;

TEST_CASE("a minimal config parses with documented defaults") {
  const auto config = parse_config("env = chain\n");
  CHECK(config.env.name == "chain");
  CHECK(config.attack.mode == AttackMode::none);
  CHECK(config.attack.alpha == 1.0);
  CHECK(config.attack.anneal_threshold == 1.0);
  CHECK(config.eval_interval == 50);
  CHECK(config.eval_episodes == 20);
  CHECK(config.seeds == std::vector<std::uint64_t>{1});
  CHECK(config.run_id == "chain_none");
}

TEST_CASE("dotted keys land in their sections") {
  const auto config = parse_config(
      "env = gridworld\n"
      "env.width = 5\n"
      "env.height = 3\n"
      "attack.mode = sleepernets_outer\n"
      "attack.beta = 0.005\n"
      "attack.c = 40\n"
      "attack.accumulate_budget = true\n"
      "learner.kind = q_learning\n"
      "learner.epsilon = 0.25\n"
      "gamma = 0.97\n"
      "seeds = 1, 2, 3\n"
      "episodes = 777\n");
  CHECK(config.env.width == 5);
  CHECK(config.env.height == 3);
  CHECK(config.attack.mode == AttackMode::sleepernets_outer);
  CHECK(config.attack.beta == 0.005);
  CHECK(config.attack.c == 40.0);
  CHECK(config.attack.accumulate_budget);
  CHECK(config.learner.kind == LearnerKind::q_learning);
  CHECK(config.learner.epsilon == 0.25);
  REQUIRE(config.gamma.has_value());
  CHECK(*config.gamma == 0.97);
  CHECK(config.seeds == std::vector<std::uint64_t>({1, 2, 3}));
  CHECK(config.episodes == 777);
  CHECK(config.run_id == "gridworld_sleepernets_outer");
}

TEST_CASE("comments and blank lines are ignored") {
  const auto config = parse_config(
      "# experiment\n"
      "\n"
      "env = m2   # the two-path counterexample\n"
      "env.c = 2.5\n");
  CHECK(config.env.name == "m2");
  CHECK(config.env.c == 2.5);
}

TEST_CASE("an empty document is missing its environment") {
  CHECK_THROWS_WITH_AS(parse_config(""), "missing required key: env", ConfigError);
}

TEST_CASE("unknown keys are rejected with their line number") {
  try {
    parse_config("env = chain\nattack.gamma = 0.9\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 2") != std::string::npos);
    CHECK(what.find("attack.gamma") != std::string::npos);
  }
}

TEST_CASE("malformed lines are rejected with their line number") {
  try {
    parse_config("env = chain\nthis is not a key value pair\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("numeric values must parse completely") {
  CHECK_THROWS_AS(parse_config("env = chain\nattack.beta = 0.5x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("env = chain\nepisodes = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("env = chain\nattack.accumulate_budget = yes\n"), ConfigError);
}

TEST_CASE("every environment name resolves") {
  for (const std::string name : {"m1", "m1_attack", "m2", "gridworld", "chain", "random"}) {
    const auto config = parse_config("env = " + name + "\n");
    const auto env = build_env(config);
    CHECK(env.mdp.n_states > 0);
  }
  CHECK_THROWS_AS(build_env(parse_config("env = atari\n")), ConfigError);
}

TEST_CASE("the gamma override reaches the environment") {
  const auto config = parse_config("env = chain\ngamma = 0.42\n");
  CHECK(build_env(config).mdp.gamma == 0.42);
  CHECK_THROWS_AS(build_env(parse_config("env = chain\ngamma = 1.0\n")), ConfigError);
}

TEST_CASE("overrides reuse the parser's key dispatch") {
  auto config = parse_config("env = chain\n");
  apply_config_override(config, "attack.beta", "0.25");
  CHECK(config.attack.beta == 0.25);
  CHECK_THROWS_AS(apply_config_override(config, "nope", "1"), ConfigError);
}
