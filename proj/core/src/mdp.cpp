#include "poisonlab/mdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace poisonlab {

namespace {

constexpr double kSumTol = 1e-12;

std::string fmt_at(double value, int s, int a) {
  std::ostringstream os;
  os << value << " at (" << s << "," << a << ")";
  return os.str();
}

}  // namespace

Mdp Mdp::zeros(int n_states, int n_actions, double gamma) {
  Mdp m;
  m.n_states = n_states;
  m.n_actions = n_actions;
  m.gamma = gamma;
  const std::size_t n = static_cast<std::size_t>(n_states) * n_actions * n_states;
  m.transition.assign(n, 0.0);
  m.reward.assign(n, 0.0);
  m.initial_dist.assign(n_states, 0.0);
  m.terminal.assign(n_states, 0);
  return m;
}

double Mdp::max_abs_reward() const {
  double r_max = 0.0;
  for (double r : reward) r_max = std::max(r_max, std::abs(r));
  return r_max;
}

PolicyTable PolicyTable::uniform(int n_states, int n_actions) {
  PolicyTable p;
  p.n_states = n_states;
  p.n_actions = n_actions;
  p.probs.assign(static_cast<std::size_t>(n_states) * n_actions, 1.0 / n_actions);
  return p;
}

PolicyTable PolicyTable::deterministic(const std::vector<int>& actions, int n_actions) {
  PolicyTable p;
  p.n_states = static_cast<int>(actions.size());
  p.n_actions = n_actions;
  p.probs.assign(static_cast<std::size_t>(p.n_states) * n_actions, 0.0);
  for (int s = 0; s < p.n_states; ++s) {
    if (actions[s] < 0 || actions[s] >= n_actions)
      throw std::out_of_range("deterministic policy: action index out of range");
    p.at(s, actions[s]) = 1.0;
  }
  return p;
}

std::optional<Violation> validate(const Mdp& mdp) {
  if (mdp.n_states <= 0) return Violation{"n_states must be positive"};
  if (mdp.n_actions <= 0) return Violation{"n_actions must be positive"};

  const std::size_t want =
      static_cast<std::size_t>(mdp.n_states) * mdp.n_actions * mdp.n_states;
  if (mdp.transition.size() != want)
    return Violation{"transition tensor has wrong size"};
  if (mdp.reward.size() != want) return Violation{"reward tensor has wrong size"};
  if (mdp.initial_dist.size() != static_cast<std::size_t>(mdp.n_states))
    return Violation{"initial_dist has wrong size"};
  if (mdp.terminal.size() != static_cast<std::size_t>(mdp.n_states))
    return Violation{"terminal mask has wrong size"};

  if (mdp.horizon && *mdp.horizon < 1) return Violation{"horizon must be positive"};
  if (!mdp.horizon && !(mdp.gamma < 1.0)) return Violation{"gamma must be < 1"};
  if (mdp.gamma < 0.0 || mdp.gamma > 1.0) return Violation{"gamma must lie in [0,1]"};

  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      double sum = 0.0;
      for (int s2 = 0; s2 < mdp.n_states; ++s2) {
        const double p = mdp.t(s, a, s2);
        if (p < 0.0 || p > 1.0)
          return Violation{"transition probability " + fmt_at(p, s, a)};
        sum += p;
      }
      if (std::abs(sum - 1.0) > kSumTol)
        return Violation{"row sum " + fmt_at(sum, s, a)};
    }
  }

  double init_sum = 0.0;
  for (int s = 0; s < mdp.n_states; ++s) {
    const double p = mdp.initial_dist[s];
    if (p < 0.0 || p > 1.0) return Violation{"initial_dist entry out of [0,1]"};
    init_sum += p;
  }
  if (std::abs(init_sum - 1.0) > kSumTol)
    return Violation{"initial_dist sums to " + std::to_string(init_sum)};

  for (int s = 0; s < mdp.n_states; ++s) {
    if (!mdp.is_terminal(s)) continue;
    for (int a = 0; a < mdp.n_actions; ++a) {
      if (mdp.t(s, a, s) != 1.0)
        return Violation{"terminal state " + std::to_string(s) +
                         " does not self-loop under action " + std::to_string(a)};
      for (int s2 = 0; s2 < mdp.n_states; ++s2) {
        if (mdp.r(s, a, s2) != 0.0)
          return Violation{"terminal state " + std::to_string(s) +
                           " has non-zero reward under action " + std::to_string(a)};
      }
    }
  }
  return std::nullopt;
}

Trajectory sample_trajectory(const Mdp& mdp, const PolicyTable& policy, int horizon,
                             Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("sample_trajectory: horizon must be >= 1");
  if (policy.n_states < mdp.n_states || policy.n_actions != mdp.n_actions)
    throw std::invalid_argument("sample_trajectory: policy dimensions do not cover the MDP");

  Trajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(horizon));

  int s = rng.categorical(std::span<const double>(mdp.initial_dist));
  if (mdp.is_terminal(s))
    throw std::invalid_argument("sample_trajectory: initial state is terminal");
  while (traj.length() < horizon) {
    if (mdp.is_terminal(s)) break;
    const int a = rng.categorical(std::span<const double>(
        policy.probs.data() + static_cast<std::size_t>(s) * policy.n_actions,
        static_cast<std::size_t>(policy.n_actions)));
    const int s2 = rng.categorical(std::span<const double>(
        mdp.transition.data() + mdp.idx(s, a, 0),
        static_cast<std::size_t>(mdp.n_states)));
    traj.steps.push_back({s, a, mdp.r(s, a, s2)});
    s = s2;
  }
  traj.final_state = s;
  traj.truncated = !mdp.is_terminal(s);
  return traj;
}

double discounted_return(const Trajectory& trajectory, double gamma, int start) {
  const int n = trajectory.length();
  if (start < 0 || start > n)
    throw std::out_of_range("discounted_return: start index out of range");
  double acc = 0.0;
  for (int i = n - 1; i >= start; --i) {
    acc = trajectory.steps[static_cast<std::size_t>(i)].reward + gamma * acc;
  }
  return acc;
}

}  // namespace poisonlab
