#pragma once

#include <string>
#include <vector>

#include "poisonlab/dp.hpp"
#include "poisonlab/envs.hpp"

namespace poisonlab {

enum class VerifySuite { lemmas, theorems, counterexamples, all };

VerifySuite verify_suite_from_string(const std::string& name);

/// One verification check: the worst residual observed across its sweep
/// and the bound it must stay under.
struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

/// Residual checks of the adversarial MDP's two value identities on
/// random (MDP, policy, budget) tuples: poisoned-state values equal the
/// policy's target-action probability, and benign-state values match the
/// benign MDP, both for the infinite-horizon fixed point and for
/// finite-horizon backward induction.
std::vector<CheckResult> verify_lemmas(int n_cases = 100, std::uint64_t seed = 2024);

/// Brute-force optimality checks on small random instances: a single
/// deterministic policy dominates at every state, plays the target action
/// in every poisoned state with value 1, matches the benign optimum on
/// benign states, and is never beaten by random stochastic policies.
std::vector<CheckResult> verify_theorems(int n_mdps = 20, int n_random_policies = 1000,
                                         std::uint64_t seed = 77);

/// Counterexample analyses: bisected discount thresholds of the
/// fixed-value poisoning failures against their analytic values, the
/// printed closed-form returns, and the dynamic attack's preservation of
/// target-action optimality and benign behavior on the same MDPs.
std::vector<CheckResult> verify_counterexamples();

/// Runs the requested suite (or everything) and returns the per-check
/// results in order.
std::vector<CheckResult> run_verification(VerifySuite suite);

/// Draws a random stochastic policy with strictly positive rows.
PolicyTable random_stochastic_policy(int n_states, int n_actions, Rng& rng);

}  // namespace poisonlab
