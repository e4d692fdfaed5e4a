#pragma once

#include <cstdint>
#include <vector>

#include "poisonlab/envs.hpp"
#include "poisonlab/learners.hpp"
#include "poisonlab/mdp.hpp"
#include "poisonlab/poison.hpp"

namespace poisonlab {

struct EpisodeRecord {
  int episode = 0;
  double benign_return = 0.0;    // discounted return on the true rewards
  int poisoned_steps = 0;
  double cumulative_poison_rate = 0.0;
  double latest_asr = 0.0;
};

/// Per-episode training log plus run totals.
struct RunLog {
  std::vector<EpisodeRecord> episodes;
  long total_steps = 0;
  long total_poisoned = 0;
};

/// In-place outer-loop poisoning of a completed trajectory. Selects
/// floor(beta * |H|) step indices uniformly without replacement and
/// processes them in ascending order: each selected step's state is
/// swapped for its triggered copy, its reward becomes
///   [a == target]*c (+/-c) - alpha * gamma * G(t+1),
/// and the preceding step's reward is patched by -gamma*r_t + gamma*G(t),
/// where both return estimates are read from the trajectory's rewards as
/// they stand when the step is processed and G(t) is taken before the
/// step's own rewrite. Returns the sorted selected indices (empty when
/// the floor is zero, in which case the trajectory is untouched).
std::vector<int> poison_trajectory_sleepernets(Trajectory& trajectory,
                                               const AttackSpec& spec,
                                               const TriggerScheme& scheme,
                                               double gamma, Rng& rng);

/// Applies the same edits to a caller-chosen ascending index set.
void apply_sleepernets_edits(Trajectory& trajectory, std::span<const int> sorted_indices,
                             const AttackSpec& spec, const TriggerScheme& scheme,
                             double gamma);

/// Outer-loop poisoning with an explicit step count instead of the
/// per-episode floor; used by the accumulate-across-episodes budget.
std::vector<int> poison_trajectory_count(Trajectory& trajectory, int count,
                                         const AttackSpec& spec,
                                         const TriggerScheme& scheme, double gamma,
                                         Rng& rng);

struct InnerLoopDecision {
  int observation = 0;
  bool poison = false;
};

/// Per-step inner-loop decision: with probability beta the agent is shown
/// the triggered copy of its state (and the caller substitutes the fixed
/// +/-c reward after the action is taken).
InnerLoopDecision inner_loop_static_step(int s, const AttackSpec& spec,
                                         const TriggerScheme& scheme, Rng& rng);

/// Poisoning-rate annealing gate: returns false (skip poisoning) once the
/// most recently measured attack success rate reaches the threshold.
bool anneal_gate(double current_asr, const AttackSpec& spec);

struct TrainResult {
  PolicyTable policy;  // deployment policy: softmax for PG, greedy for Q-learning
  RunLog log;
};

/// Trains the configured learner on the benign environment for
/// `episodes` episodes of at most `horizon` steps, applying the
/// configured attack mode, and measures the attack success rate every
/// `eval_interval` episodes (and once more after the final episode).
/// Fully deterministic given `seed`: environment dynamics, poisoning
/// decisions, learner sampling, and evaluation each consume their own
/// stream derived from it.
TrainResult run_training(const EnvDescriptor& env, const LearnerConfig& learner,
                         const AttackSpec& spec, int episodes, int horizon,
                         int eval_interval, int eval_episodes, std::uint64_t seed);

}  // namespace poisonlab
