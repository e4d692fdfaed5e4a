#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poisonlab/rng.hpp"

namespace poisonlab {

/// Finite tabular MDP with per-transition rewards.
///
/// Transition and reward tensors are stored flat in (state, action,
/// next-state) order. Terminal states are represented as absorbing
/// self-loops with zero reward so that infinite-horizon dynamic
/// programming and episodic sampling share one structure.
struct Mdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> transition;       // T[s][a][s'], row-major
  std::vector<double> reward;           // R[s][a][s'], row-major
  double gamma = 0.0;                   // discount, < 1 unless horizon is set
  std::vector<double> initial_dist;     // start-state distribution over states
  std::vector<std::uint8_t> terminal;   // absorbing-state mask, one entry per state
  std::optional<int> horizon;           // finite-horizon semantics when set

  std::size_t idx(int s, int a, int s2) const {
    return (static_cast<std::size_t>(s) * n_actions + a) * n_states + s2;
  }
  double t(int s, int a, int s2) const { return transition[idx(s, a, s2)]; }
  double r(int s, int a, int s2) const { return reward[idx(s, a, s2)]; }
  double& t_ref(int s, int a, int s2) { return transition[idx(s, a, s2)]; }
  double& r_ref(int s, int a, int s2) { return reward[idx(s, a, s2)]; }
  bool is_terminal(int s) const { return terminal[static_cast<std::size_t>(s)] != 0; }

  /// Allocates zeroed tensors for the given sizes.
  static Mdp zeros(int n_states, int n_actions, double gamma);

  /// Largest absolute reward entry; useful for value bounds.
  double max_abs_reward() const;
};

/// Stochastic tabular policy: one probability row per state.
struct PolicyTable {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> probs;  // pi[s][a], row-major

  double at(int s, int a) const {
    return probs[static_cast<std::size_t>(s) * n_actions + a];
  }
  double& at(int s, int a) {
    return probs[static_cast<std::size_t>(s) * n_actions + a];
  }

  static PolicyTable uniform(int n_states, int n_actions);
  /// Deterministic policy from one action index per state.
  static PolicyTable deterministic(const std::vector<int>& actions, int n_actions);
};

struct TrajectoryStep {
  int state = 0;
  int action = 0;
  double reward = 0.0;
};

/// One sampled episode. `final_state` is the landing state of the last
/// step (the terminal that absorbed the episode, or wherever the horizon
/// cut it off); `truncated` distinguishes the two.
struct Trajectory {
  std::vector<TrajectoryStep> steps;
  int final_state = 0;
  bool truncated = false;

  int length() const { return static_cast<int>(steps.size()); }
};

/// First violated invariant of an Mdp, if any.
struct Violation {
  std::string message;
};

/// Checks every structural invariant: tensor dimensions, probability
/// bounds, row sums within 1e-12, initial-distribution normalization,
/// absorbing zero-reward terminals, and the discount/horizon rule.
/// Returns std::nullopt when the MDP is well formed.
std::optional<Violation> validate(const Mdp& mdp);

/// Samples an episode under `policy`, starting from `initial_dist` and
/// stopping at a terminal state or after `horizon` steps. The policy may
/// be defined on a superset of the MDP's states (rows beyond n_states are
/// ignored); fewer rows than states is a dimension error.
Trajectory sample_trajectory(const Mdp& mdp, const PolicyTable& policy, int horizon,
                             Rng& rng);

/// Discounted return of the trajectory suffix beginning at step index
/// `start` (0-based). `start == length` returns 0 — the past-the-end
/// convention used when a poisoned step is last. Computed by backward
/// accumulation, so G(t) == r_t + gamma * G(t+1) holds exactly.
double discounted_return(const Trajectory& trajectory, double gamma, int start);

}  // namespace poisonlab
