#pragma once

#include <deque>
#include <span>
#include <string>

#include "poisonlab/dp.hpp"
#include "poisonlab/mdp.hpp"

namespace poisonlab {

/// Logits of a tabular softmax policy. Defined over the full doubled
/// state space from the start, so triggered observations are in-domain
/// for the learner.
struct SoftmaxPolicyParams {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> logits;

  double at(int s, int a) const {
    return logits[static_cast<std::size_t>(s) * n_actions + a];
  }
  double& at(int s, int a) {
    return logits[static_cast<std::size_t>(s) * n_actions + a];
  }

  static SoftmaxPolicyParams zeros(int n_states, int n_actions);
};

/// Row-wise softmax with max-subtraction for numerical stability.
PolicyTable policy_from_logits(const SoftmaxPolicyParams& params);

/// Monte-Carlo policy-gradient step: for every step t of every
/// trajectory, ascends the log-policy gradient weighted by the discounted
/// return from t (computed on the rewards as stored, poisoned or not),
/// minus an optional constant baseline. The gradient is evaluated once at
/// the incoming parameters and applied in a single update, so the result
/// is deterministic given the batch. Rows of states the batch never
/// visits are left untouched.
void policy_gradient_update(SoftmaxPolicyParams& params,
                            std::span<const Trajectory> batch, double gamma,
                            double learning_rate, double baseline = 0.0);

/// Bounded FIFO queue of trajectories.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Trajectory trajectory);
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<Trajectory>& entries() const { return entries_; }
  /// Total transitions across all buffered trajectories.
  long total_steps() const { return total_steps_; }

 private:
  std::size_t capacity_;
  std::deque<Trajectory> entries_;
  long total_steps_ = 0;
};

/// One round of temporal-difference backups on transitions drawn
/// uniformly from the buffer (with replacement). The bootstrap target is
/// r + gamma * max_a' Q(s', a'), dropped to r when the transition ends
/// the episode at a terminal.
void q_learning_update(QTable& q, const ReplayBuffer& buffer, int sample_size,
                       double gamma, double learning_rate, Rng& rng);

/// Epsilon-greedy policy rows from a Q-table: mass 1 - eps + eps/|A| on
/// the per-row argmax (lowest index on ties), eps/|A| elsewhere.
PolicyTable epsilon_greedy(const QTable& q, double epsilon);

enum class LearnerKind { policy_gradient, q_learning };

const char* to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(const std::string& name);

struct LearnerConfig {
  LearnerKind kind = LearnerKind::policy_gradient;
  double learning_rate = 0.1;
  double epsilon = 0.1;       // exploration rate, q_learning only
  int batch_episodes = 1;     // episodes per policy-gradient update
  int buffer_capacity = 256;  // q_learning replay capacity
  int td_samples = 64;        // TD backups per episode, q_learning only
};

}  // namespace poisonlab
