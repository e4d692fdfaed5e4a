#include "poisonlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace poisonlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  std::size_t consumed = 0;
  double out;
  try {
    out = std::stod(value, &consumed);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
  if (consumed != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
  return out;
}

long parse_int(const std::string& value, const std::string& key) {
  std::size_t consumed = 0;
  long out;
  try {
    out = std::stol(value, &consumed);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
  if (consumed != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& value) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("key 'seeds': empty entry in list");
    seeds.push_back(static_cast<std::uint64_t>(parse_int(item, "seeds")));
  }
  if (seeds.empty()) throw ConfigError("key 'seeds': need at least one seed");
  return seeds;
}

}  // namespace

void apply_config_override(ExperimentConfig& config, const std::string& key,
                           const std::string& value) {
  if (key == "run_id") config.run_id = value;
  else if (key == "env") config.env.name = value;
  else if (key == "env.c") config.env.c = parse_double(value, key);
  else if (key == "env.exit_reward") config.env.exit_reward = parse_double(value, key);
  else if (key == "env.width") config.env.width = static_cast<int>(parse_int(value, key));
  else if (key == "env.height") config.env.height = static_cast<int>(parse_int(value, key));
  else if (key == "env.goal_reward") config.env.goal_reward = parse_double(value, key);
  else if (key == "env.step_cost") config.env.step_cost = parse_double(value, key);
  else if (key == "env.slip") config.env.slip = parse_double(value, key);
  else if (key == "env.n") config.env.n = static_cast<int>(parse_int(value, key));
  else if (key == "env.fwd_reward") config.env.fwd_reward = parse_double(value, key);
  else if (key == "env.n_states") config.env.n_states = static_cast<int>(parse_int(value, key));
  else if (key == "env.n_actions") config.env.n_actions = static_cast<int>(parse_int(value, key));
  else if (key == "env.seed") config.env.seed = static_cast<std::uint64_t>(parse_int(value, key));
  else if (key == "env.reward_scale") config.env.reward_scale = parse_double(value, key);
  else if (key == "learner.kind") config.learner.kind = learner_kind_from_string(value);
  else if (key == "learner.learning_rate") config.learner.learning_rate = parse_double(value, key);
  else if (key == "learner.epsilon") config.learner.epsilon = parse_double(value, key);
  else if (key == "learner.batch_episodes") config.learner.batch_episodes = static_cast<int>(parse_int(value, key));
  else if (key == "learner.buffer_capacity") config.learner.buffer_capacity = static_cast<int>(parse_int(value, key));
  else if (key == "learner.td_samples") config.learner.td_samples = static_cast<int>(parse_int(value, key));
  else if (key == "attack.mode") config.attack.mode = attack_mode_from_string(value);
  else if (key == "attack.beta") config.attack.beta = parse_double(value, key);
  else if (key == "attack.alpha") config.attack.alpha = parse_double(value, key);
  else if (key == "attack.c") config.attack.c = parse_double(value, key);
  else if (key == "attack.target_action") config.attack.target_action = static_cast<int>(parse_int(value, key));
  else if (key == "attack.anneal_threshold") config.attack.anneal_threshold = parse_double(value, key);
  else if (key == "attack.accumulate_budget") {
    if (value == "true") config.attack.accumulate_budget = true;
    else if (value == "false") config.attack.accumulate_budget = false;
    else throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
  }
  else if (key == "gamma") config.gamma = parse_double(value, key);
  else if (key == "episodes") config.episodes = static_cast<int>(parse_int(value, key));
  else if (key == "horizon") config.horizon = static_cast<int>(parse_int(value, key));
  else if (key == "seeds") config.seeds = parse_seed_list(value);
  else if (key == "eval_interval") config.eval_interval = static_cast<int>(parse_int(value, key));
  else if (key == "eval_episodes") config.eval_episodes = static_cast<int>(parse_int(value, key));
  else if (key == "output_dir") config.output_dir = value;
  else throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    try {
      apply_config_override(config, key, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (config.env.name.empty())
    throw ConfigError("missing required key: env");
  if (config.run_id.empty())
    config.run_id = config.env.name + "_" + to_string(config.attack.mode);
  if (config.episodes < 1 || config.horizon < 1 || config.eval_interval < 1 ||
      config.eval_episodes < 1)
    throw ConfigError("episodes, horizon, eval_interval, eval_episodes must be >= 1");
  return config;
}

EnvDescriptor build_env(const ExperimentConfig& config) {
  const EnvParams& e = config.env;
  EnvDescriptor env;
  if (e.name == "m1") env = make_m1(e.c);
  else if (e.name == "m1_attack") env = make_m1_attack(e.c, e.exit_reward);
  else if (e.name == "m2") env = make_m2(e.c);
  else if (e.name == "gridworld")
    env = make_gridworld(e.width, e.height, e.goal_reward, e.step_cost, e.slip);
  else if (e.name == "chain") env = make_chain(e.n, e.fwd_reward);
  else if (e.name == "random")
    env = make_random_mdp(e.n_states, e.n_actions, e.seed, e.reward_scale);
  else throw ConfigError("unknown environment '" + e.name + "'");
  if (config.gamma) {
    env.mdp.gamma = *config.gamma;
    if (auto v = validate(env.mdp))
      throw ConfigError("gamma override invalidates environment: " + v->message);
  }
  return env;
}

}  // namespace poisonlab
