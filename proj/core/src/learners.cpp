#include "poisonlab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poisonlab {

SoftmaxPolicyParams SoftmaxPolicyParams::zeros(int n_states, int n_actions) {
  SoftmaxPolicyParams p;
  p.n_states = n_states;
  p.n_actions = n_actions;
  p.logits.assign(static_cast<std::size_t>(n_states) * n_actions, 0.0);
  return p;
}

PolicyTable policy_from_logits(const SoftmaxPolicyParams& params) {
  PolicyTable table;
  table.n_states = params.n_states;
  table.n_actions = params.n_actions;
  table.probs.assign(params.logits.size(), 0.0);
  for (int s = 0; s < params.n_states; ++s) {
    double row_max = params.at(s, 0);
    for (int a = 1; a < params.n_actions; ++a)
      row_max = std::max(row_max, params.at(s, a));
    double sum = 0.0;
    for (int a = 0; a < params.n_actions; ++a) {
      const double e = std::exp(params.at(s, a) - row_max);
      table.at(s, a) = e;
      sum += e;
    }
    for (int a = 0; a < params.n_actions; ++a) table.at(s, a) /= sum;
  }
  return table;
}

void policy_gradient_update(SoftmaxPolicyParams& params,
                            std::span<const Trajectory> batch, double gamma,
                            double learning_rate, double baseline) {
  if (batch.empty())
    throw std::invalid_argument("policy_gradient_update: empty batch");

  const PolicyTable pi = policy_from_logits(params);
  std::vector<double> grad(params.logits.size(), 0.0);

  for (const Trajectory& traj : batch) {
    double g = 0.0;
    // backward pass gives the return-from-t for every step
    std::vector<double> returns(traj.steps.size());
    for (int i = traj.length() - 1; i >= 0; --i) {
      g = traj.steps[static_cast<std::size_t>(i)].reward + gamma * g;
      returns[static_cast<std::size_t>(i)] = g;
    }
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
      const auto& step = traj.steps[i];
      if (step.state < 0 || step.state >= params.n_states)
        throw std::out_of_range("policy_gradient_update: state outside parameter table");
      const double weight = returns[i] - baseline;
      const std::size_t row = static_cast<std::size_t>(step.state) * params.n_actions;
      for (int a = 0; a < params.n_actions; ++a) {
        const double indicator = (a == step.action) ? 1.0 : 0.0;
        grad[row + a] += weight * (indicator - pi.at(step.state, a));
      }
    }
  }
  for (std::size_t i = 0; i < grad.size(); ++i)
    params.logits[i] += learning_rate * grad[i];
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Trajectory trajectory) {
  total_steps_ += trajectory.length();
  entries_.push_back(std::move(trajectory));
  if (entries_.size() > capacity_) {
    total_steps_ -= entries_.front().length();
    entries_.pop_front();
  }
}

void q_learning_update(QTable& q, const ReplayBuffer& buffer, int sample_size,
                       double gamma, double learning_rate, Rng& rng) {
  if (buffer.empty()) throw std::invalid_argument("q_learning_update: empty buffer");
  if (sample_size < 1)
    throw std::invalid_argument("q_learning_update: sample_size must be >= 1");

  const long total = buffer.total_steps();
  for (int k = 0; k < sample_size; ++k) {
    long pick = rng.uniform_int(static_cast<int>(total));
    const Trajectory* traj = nullptr;
    for (const Trajectory& t : buffer.entries()) {
      if (pick < t.length()) {
        traj = &t;
        break;
      }
      pick -= t.length();
    }
    const int j = static_cast<int>(pick);
    const auto& step = traj->steps[static_cast<std::size_t>(j)];
    const bool ends_at_terminal = (j == traj->length() - 1) && !traj->truncated;
    double target = step.reward;
    if (!ends_at_terminal) {
      const int s2 = (j + 1 < traj->length())
                         ? traj->steps[static_cast<std::size_t>(j + 1)].state
                         : traj->final_state;
      double best = q.at(s2, 0);
      for (int a = 1; a < q.n_actions; ++a) best = std::max(best, q.at(s2, a));
      target += gamma * best;
    }
    q.at(step.state, step.action) +=
        learning_rate * (target - q.at(step.state, step.action));
  }
}

PolicyTable epsilon_greedy(const QTable& q, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epsilon_greedy: epsilon must lie in [0,1]");
  PolicyTable table;
  table.n_states = q.n_states;
  table.n_actions = q.n_actions;
  table.probs.assign(q.q.size(), epsilon / q.n_actions);
  for (int s = 0; s < q.n_states; ++s) {
    int best = 0;
    for (int a = 1; a < q.n_actions; ++a)
      if (q.at(s, a) > q.at(s, best)) best = a;
    table.at(s, best) += 1.0 - epsilon;
  }
  return table;
}

const char* to_string(LearnerKind kind) {
  return kind == LearnerKind::policy_gradient ? "policy_gradient" : "q_learning";
}

LearnerKind learner_kind_from_string(const std::string& name) {
  if (name == "policy_gradient") return LearnerKind::policy_gradient;
  if (name == "q_learning") return LearnerKind::q_learning;
  throw std::invalid_argument("unknown learner kind: " + name);
}

}  // namespace poisonlab
