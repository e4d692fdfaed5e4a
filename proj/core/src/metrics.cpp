#include "poisonlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "poisonlab/harness.hpp"

namespace poisonlab {

double attack_success_rate(const PolicyTable& policy, const EnvDescriptor& env,
                           int target_action, int n_episodes, int horizon, Rng& rng) {
  if (policy.n_states < env.scheme.total_states())
    throw std::invalid_argument("attack_success_rate: policy does not cover poisoned states");
  if (target_action < 0 || target_action >= env.mdp.n_actions)
    throw std::invalid_argument("attack_success_rate: target action out of range");
  if (n_episodes < 1)
    throw std::invalid_argument("attack_success_rate: need at least one episode");

  double acc = 0.0;
  long occurrences = 0;
  for (int ep = 0; ep < n_episodes; ++ep) {
    const Trajectory traj = sample_trajectory(env.mdp, policy, horizon, rng);
    for (const auto& step : traj.steps) {
      acc += policy.at(apply_trigger(env.scheme, step.state), target_action);
      ++occurrences;
    }
  }
  return acc / static_cast<double>(occurrences);
}

double benign_return_ratio(double poisoned_mean_return, double baseline_mean_return,
                           double baseline_std) {
  if (baseline_mean_return > 0.0)
    return std::min(1.0, poisoned_mean_return / baseline_mean_return);
  if (baseline_std <= 0.0)
    throw std::invalid_argument(
        "benign_return_ratio: non-positive baseline with zero spread");
  return std::min(1.0,
                  std::exp((poisoned_mean_return - baseline_mean_return) / baseline_std));
}

double empirical_poison_rate(const RunLog& log) {
  if (log.episodes.empty())
    throw std::invalid_argument("empirical_poison_rate: empty run log");
  if (log.total_steps == 0) return 0.0;
  return static_cast<double>(log.total_poisoned) / static_cast<double>(log.total_steps);
}

EvalReport evaluate_policy(const PolicyTable& policy, const EnvDescriptor& env,
                           int target_action, int n_episodes, int horizon,
                           double baseline_mean_return, double baseline_std,
                           const RunLog& log, Rng& rng) {
  EvalReport report;
  report.asr = attack_success_rate(policy, env, target_action, n_episodes, horizon, rng);
  double sum = 0.0;
  for (int ep = 0; ep < n_episodes; ++ep) {
    const Trajectory traj = sample_trajectory(env.mdp, policy, horizon, rng);
    sum += discounted_return(traj, env.mdp.gamma, 0);
  }
  report.mean_benign_return = sum / n_episodes;
  report.brr =
      benign_return_ratio(report.mean_benign_return, baseline_mean_return, baseline_std);
  report.episodes_evaluated = n_episodes;
  report.poison_rate = empirical_poison_rate(log);
  return report;
}

}  // namespace poisonlab
