#pragma once

#include "poisonlab/envs.hpp"
#include "poisonlab/mdp.hpp"

namespace poisonlab {

struct RunLog;  // harness.hpp

/// Summary of one evaluation pass.
struct EvalReport {
  double asr = 0.0;
  double mean_benign_return = 0.0;
  double brr = 0.0;
  int episodes_evaluated = 0;
  double poison_rate = 0.0;
};

/// Probability mass the policy puts on the target action under triggered
/// observations, averaged over every state occurrence of `n_episodes`
/// benign rollouts. Using the policy's probabilities directly (instead of
/// sampling actions at triggered states) is exact for tabular policies,
/// leaving visitation as the only sampling noise.
double attack_success_rate(const PolicyTable& policy, const EnvDescriptor& env,
                           int target_action, int n_episodes, int horizon, Rng& rng);

/// Poisoned-over-baseline episodic return, capped at 1. Positive
/// baselines use the plain ratio; non-positive baselines (possible in
/// step-cost environments) map the standardized difference through
/// exp((poisoned - baseline) / baseline_std), still capped at 1. A
/// non-positive baseline with zero spread is a degenerate-baseline error.
double benign_return_ratio(double poisoned_mean_return, double baseline_mean_return,
                           double baseline_std);

/// Total poisoned steps divided by total environment steps.
double empirical_poison_rate(const RunLog& log);

/// Bundles one full evaluation pass over a trained policy: the success
/// rate on triggered observations, the mean discounted return of fresh
/// benign rollouts, its ratio against a baseline, and the training run's
/// realized poisoning rate.
EvalReport evaluate_policy(const PolicyTable& policy, const EnvDescriptor& env,
                           int target_action, int n_episodes, int horizon,
                           double baseline_mean_return, double baseline_std,
                           const RunLog& log, Rng& rng);

}  // namespace poisonlab
