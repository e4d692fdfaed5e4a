#pragma once

#include <vector>

#include "poisonlab/mdp.hpp"
#include "poisonlab/poison.hpp"

namespace poisonlab {

/// State values, one entry per state of the evaluated MDP.
struct ValueTable {
  std::vector<double> values;

  double at(int s) const { return values[static_cast<std::size_t>(s)]; }
  int size() const { return static_cast<int>(values.size()); }
};

/// Action values Q[s][a].
struct QTable {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> q;

  double at(int s, int a) const {
    return q[static_cast<std::size_t>(s) * n_actions + a];
  }
  double& at(int s, int a) {
    return q[static_cast<std::size_t>(s) * n_actions + a];
  }
};

/// Fixed point of the Bellman expectation operator for `policy`, to
/// within `tol` in max norm. Iterates synchronous backups until the
/// successive-iterate difference drops below tol*(1-gamma)/gamma, which
/// bounds the true error by tol.
ValueTable policy_evaluation(const Mdp& mdp, const PolicyTable& policy, double tol);

/// Q[s][a] = sum_s' T(s,a,s') * (R(s,a,s') + gamma * V(s')).
QTable q_from_values(const Mdp& mdp, const ValueTable& values);

struct ViResult {
  ValueTable values;
  PolicyTable policy;  // greedy, deterministic; ties broken by lowest action index
};

/// Optimal values within `tol` plus the greedy policy extracted from them.
ViResult value_iteration(const Mdp& mdp, double tol);

/// Backward induction over `H` stages with zero boundary values.
/// Element t-1 of the result holds the values with t stages to go
/// counted from the front, i.e. result[0] is the full-horizon table.
std::vector<ValueTable> finite_horizon_evaluation(const Mdp& mdp,
                                                  const PolicyTable& policy, int H);

/// Evaluates `policy` (over the doubled state space) in the adversarial
/// MDP whose reward references the value function being computed. Each
/// backup substitutes the current iterate into the reward's branches; the
/// embedded -gamma*V + gamma*V terms cancel, so the update contracts like
/// the benign operator on benign states and pins every poisoned state's
/// value to the policy's target-action probability.
ValueTable poisoned_policy_evaluation(const PoisonedMdp& pm, const PolicyTable& policy,
                                      double tol);

/// Finite-horizon counterpart: backward induction where each stage's
/// reward references the next stage's value table.
std::vector<ValueTable> poisoned_finite_horizon_evaluation(const PoisonedMdp& pm,
                                                           const PolicyTable& policy,
                                                           int H);

struct BruteForceResult {
  PolicyTable policy;
  ValueTable values;
};

/// Enumerates every deterministic policy over the doubled state space,
/// evaluates each in the adversarial MDP, and returns one whose value
/// dominates all others at every state simultaneously. Throws if the
/// enumeration guard |A|^(2|S|) <= 10^6 is exceeded, if no policy
/// dominates (reporting a counterexample state), or if the winner fails
/// to play the target action in some poisoned state.
BruteForceResult brute_force_optimal(const PoisonedMdp& pm, double tol = 1e-11);

}  // namespace poisonlab
