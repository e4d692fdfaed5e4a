#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poisonlab/envs.hpp"
#include "poisonlab/learners.hpp"
#include "poisonlab/poison.hpp"

namespace poisonlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment selection plus per-environment parameters. Only the keys
/// belonging to the named environment matter; the rest keep defaults.
struct EnvParams {
  std::string name;                // required: m1, m1_attack, m2, gridworld, chain, random
  double c = 1.0;                  // m1, m1_attack, m2
  double exit_reward = 6.0;        // m1_attack
  int width = 4, height = 4;       // gridworld
  double goal_reward = 1.0, step_cost = 0.0, slip = 0.0;
  int n = 5;                       // chain
  double fwd_reward = 1.0;
  int n_states = 5, n_actions = 2; // random
  std::uint64_t seed = 1;
  double reward_scale = 1.0;
};

struct ExperimentConfig {
  std::string run_id;              // defaults to "<env>_<mode>"
  EnvParams env;
  LearnerConfig learner;
  AttackSpec attack;
  std::optional<double> gamma;     // overrides the environment's default discount
  int episodes = 1000;
  int horizon = 100;
  std::vector<std::uint64_t> seeds{1};
  int eval_interval = 50;
  int eval_episodes = 20;
  std::string output_dir = ".";
};

/// Parses the line-oriented `key = value` format with `#` comments and
/// dotted section keys (e.g. `attack.beta = 0.005`). Unknown keys and
/// malformed lines raise ConfigError with the line number; missing keys
/// keep their documented defaults, except `env`, which is required.
ExperimentConfig parse_config(const std::string& text);

/// Applies one `key = value` assignment to an existing config; used by
/// ablation sweeps. Throws ConfigError for unknown keys or bad values.
void apply_config_override(ExperimentConfig& config, const std::string& key,
                           const std::string& value);

/// Instantiates the configured environment, applying the gamma override
/// when present.
EnvDescriptor build_env(const ExperimentConfig& config);

}  // namespace poisonlab
