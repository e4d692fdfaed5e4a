#include "poisonlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "poisonlab/metrics.hpp"

namespace poisonlab {

void apply_sleepernets_edits(Trajectory& trajectory, std::span<const int> sorted_indices,
                             const AttackSpec& spec, const TriggerScheme& scheme,
                             double gamma) {
  const int len = trajectory.length();
  for (const int t : sorted_indices) {
    if (t < 0 || t >= len)
      throw std::out_of_range("apply_sleepernets_edits: index out of range");
    // Return estimates from the rewards as they currently stand; the
    // estimate at t is taken before this step's own rewrite.
    const double v_next = discounted_return(trajectory, gamma, t + 1);
    const double v_here = discounted_return(trajectory, gamma, t);

    auto& step = trajectory.steps[static_cast<std::size_t>(t)];
    step.state = apply_trigger(scheme, step.state);
    step.reward =
        static_poisoned_reward(spec, step.action) - spec.alpha * gamma * v_next;
    if (t > 0) {
      auto& prev = trajectory.steps[static_cast<std::size_t>(t - 1)];
      prev.reward = prev.reward - gamma * step.reward + gamma * v_here;
    }
  }
}

std::vector<int> poison_trajectory_count(Trajectory& trajectory, int count,
                                         const AttackSpec& spec,
                                         const TriggerScheme& scheme, double gamma,
                                         Rng& rng) {
  const int len = trajectory.length();
  if (len < 1) throw std::invalid_argument("poison_trajectory_count: empty trajectory");
  const int k = std::min(count, len);
  if (k <= 0) return {};

  // partial Fisher-Yates draw of k indices without replacement
  std::vector<int> order(static_cast<std::size_t>(len));
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < k; ++i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(i + rng.uniform_int(len - i))]);
  std::vector<int> selected(order.begin(), order.begin() + k);
  std::sort(selected.begin(), selected.end());

  apply_sleepernets_edits(trajectory, selected, spec, scheme, gamma);
  return selected;
}

std::vector<int> poison_trajectory_sleepernets(Trajectory& trajectory,
                                               const AttackSpec& spec,
                                               const TriggerScheme& scheme,
                                               double gamma, Rng& rng) {
  const int len = trajectory.length();
  if (len < 1)
    throw std::invalid_argument("poison_trajectory_sleepernets: empty trajectory");
  const int k = static_cast<int>(std::floor(spec.beta * len));
  if (k <= 0) return {};
  return poison_trajectory_count(trajectory, k, spec, scheme, gamma, rng);
}

InnerLoopDecision inner_loop_static_step(int s, const AttackSpec& spec,
                                         const TriggerScheme& scheme, Rng& rng) {
  if (s < 0 || s >= scheme.n_benign)
    throw std::out_of_range("inner_loop_static_step: state is not benign");
  const bool poison = rng.uniform() < spec.beta;
  return InnerLoopDecision{poison ? apply_trigger(scheme, s) : s, poison};
}

bool anneal_gate(double current_asr, const AttackSpec& spec) {
  if (current_asr < 0.0 || current_asr > 1.0)
    throw std::invalid_argument("anneal_gate: ASR must lie in [0,1]");
  return current_asr < spec.anneal_threshold;
}

namespace {

struct RolloutResult {
  Trajectory trajectory;
  double benign_return = 0.0;
  int poisoned_steps = 0;
};

// Inner-loop rollout: the agent acts on (possibly triggered) observations
// while the environment advances on the true state. Poisoned steps record
// the triggered observation and the fixed +/-c reward; the true rewards
// feed the benign-return tally only.
RolloutResult rollout_static_inner(const Mdp& mdp, const TriggerScheme& scheme,
                                   const AttackSpec& spec, const PolicyTable& policy,
                                   int horizon, bool allow_poisoning, Rng& rng_env,
                                   Rng& rng_poison) {
  RolloutResult out;
  int s = rng_env.categorical(std::span<const double>(mdp.initial_dist));
  if (mdp.is_terminal(s))
    throw std::invalid_argument("rollout: initial state is terminal");
  double discount = 1.0;
  while (out.trajectory.length() < horizon) {
    if (mdp.is_terminal(s)) break;
    InnerLoopDecision decision{s, false};
    if (allow_poisoning) decision = inner_loop_static_step(s, spec, scheme, rng_poison);
    const int obs = decision.observation;
    const int a = rng_env.categorical(std::span<const double>(
        policy.probs.data() + static_cast<std::size_t>(obs) * policy.n_actions,
        static_cast<std::size_t>(policy.n_actions)));
    const int s2 = rng_env.categorical(std::span<const double>(
        mdp.transition.data() + mdp.idx(s, a, 0), static_cast<std::size_t>(mdp.n_states)));
    const double true_reward = mdp.r(s, a, s2);
    const double stored_reward =
        decision.poison ? static_poisoned_reward(spec, a) : true_reward;
    out.trajectory.steps.push_back({obs, a, stored_reward});
    out.benign_return += discount * true_reward;
    discount *= mdp.gamma;
    if (decision.poison) ++out.poisoned_steps;
    s = s2;
  }
  out.trajectory.final_state = s;
  out.trajectory.truncated = !mdp.is_terminal(s);
  return out;
}

}  // namespace

TrainResult run_training(const EnvDescriptor& env, const LearnerConfig& learner,
                         const AttackSpec& spec, int episodes, int horizon,
                         int eval_interval, int eval_episodes, std::uint64_t seed) {
  if (episodes < 1 || horizon < 1 || eval_interval < 1 || eval_episodes < 1)
    throw std::invalid_argument("run_training: counts must be >= 1");
  if (spec.beta < 0.0 || spec.beta > 1.0)
    throw std::invalid_argument("run_training: beta must lie in [0,1]");
  if (spec.target_action < 0 || spec.target_action >= env.mdp.n_actions)
    throw std::invalid_argument("run_training: target action out of range");
  if (!(learner.learning_rate > 0.0))
    throw std::invalid_argument("run_training: learning rate must be > 0");
  if (learner.kind == LearnerKind::policy_gradient && learner.batch_episodes < 1)
    throw std::invalid_argument("run_training: batch_episodes must be >= 1");

  const Mdp& mdp = env.mdp;
  const int total = env.scheme.total_states();
  const double gamma = mdp.gamma;

  Rng rng_env(mix_seed(seed, 0));
  Rng rng_poison(mix_seed(seed, 1));
  Rng rng_learner(mix_seed(seed, 2));
  Rng rng_eval(mix_seed(seed, 3));

  SoftmaxPolicyParams params = SoftmaxPolicyParams::zeros(total, mdp.n_actions);
  QTable q;
  q.n_states = total;
  q.n_actions = mdp.n_actions;
  q.q.assign(static_cast<std::size_t>(total) * mdp.n_actions, 0.0);
  ReplayBuffer buffer(static_cast<std::size_t>(std::max(1, learner.buffer_capacity)));
  std::vector<Trajectory> batch;

  const bool is_pg = learner.kind == LearnerKind::policy_gradient;
  auto deployment_policy = [&]() {
    return is_pg ? policy_from_logits(params) : epsilon_greedy(q, 0.0);
  };

  RunLog log;
  log.episodes.reserve(static_cast<std::size_t>(episodes));
  double latest_asr = 0.0;
  double budget_carry = 0.0;  // unspent fractional budget, accumulate mode only

  for (int ep = 0; ep < episodes; ++ep) {
    const bool allow = anneal_gate(latest_asr, spec);
    const PolicyTable behavior =
        is_pg ? policy_from_logits(params) : epsilon_greedy(q, learner.epsilon);

    Trajectory traj;
    double benign_return = 0.0;
    int poisoned = 0;
    if (spec.mode == AttackMode::static_inner) {
      RolloutResult r = rollout_static_inner(mdp, env.scheme, spec, behavior, horizon,
                                             allow, rng_env, rng_poison);
      traj = std::move(r.trajectory);
      benign_return = r.benign_return;
      poisoned = r.poisoned_steps;
    } else {
      traj = sample_trajectory(mdp, behavior, horizon, rng_env);
      benign_return = discounted_return(traj, gamma, 0);
      if (spec.mode == AttackMode::sleepernets_outer && allow) {
        if (spec.accumulate_budget) {
          budget_carry += spec.beta * traj.length();
          const int want = static_cast<int>(std::floor(budget_carry));
          const auto indices =
              poison_trajectory_count(traj, want, spec, env.scheme, gamma, rng_poison);
          poisoned = static_cast<int>(indices.size());
          budget_carry -= poisoned;
        } else {
          const auto indices =
              poison_trajectory_sleepernets(traj, spec, env.scheme, gamma, rng_poison);
          poisoned = static_cast<int>(indices.size());
        }
      }
    }

    log.total_steps += traj.length();
    log.total_poisoned += poisoned;

    if (is_pg) {
      batch.push_back(std::move(traj));
      if ((ep + 1) % learner.batch_episodes == 0) {
        policy_gradient_update(params, batch, gamma, learner.learning_rate);
        batch.clear();
      }
    } else {
      buffer.push(std::move(traj));
      q_learning_update(q, buffer, learner.td_samples, gamma, learner.learning_rate,
                        rng_learner);
    }

    if ((ep + 1) % eval_interval == 0 || ep + 1 == episodes) {
      latest_asr = attack_success_rate(deployment_policy(), env, spec.target_action,
                                       eval_episodes, horizon, rng_eval);
    }

    EpisodeRecord rec;
    rec.episode = ep;
    rec.benign_return = benign_return;
    rec.poisoned_steps = poisoned;
    rec.cumulative_poison_rate =
        log.total_steps > 0
            ? static_cast<double>(log.total_poisoned) / static_cast<double>(log.total_steps)
            : 0.0;
    rec.latest_asr = latest_asr;
    log.episodes.push_back(rec);
  }

  return TrainResult{deployment_policy(), std::move(log)};
}

}  // namespace poisonlab
