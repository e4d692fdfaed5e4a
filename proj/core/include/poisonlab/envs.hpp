#pragma once

#include <cstdint>
#include <string>

#include "poisonlab/mdp.hpp"
#include "poisonlab/poison.hpp"

namespace poisonlab {

/// A named environment: benign MDP plus the trigger scheme that pairs it
/// with its poisoned state space.
struct EnvDescriptor {
  std::string name;
  Mdp mdp;
  TriggerScheme scheme;
  std::string notes;
};

/// Counterexample where fixed-value reward poisoning fails to make the
/// target action optimal once the discount is large enough: Start can
/// either terminate (the target action) or move to Survive, which
/// self-loops forever. All benign rewards are zero; the adversarial
/// analysis applies fixed poisoning with the full budget so the agent is
/// studied entirely in poisoned states.
EnvDescriptor make_m1(double c, double gamma = 0.9);

/// Variant of the survival counterexample used for end-to-end training
/// runs: terminating from Start earns `exit_reward`, so an unpoisoned
/// agent ends episodes immediately and triggered evaluation is dominated
/// by the Start state, where the static attack's failure is visible at
/// realistic budgets.
EnvDescriptor make_m1_attack(double c, double exit_reward = 6.0, double gamma = 0.99);

/// Counterexample where fixed-value reward poisoning destroys stealth:
/// a fast path (one intermediate state) and a slow path (two) both lead
/// to Finish, whose entry reward is c. Free +c rewards along poisoned
/// states make the slow path optimal once gamma exceeds 1 - beta.
EnvDescriptor make_m2(double c, double gamma = 0.9);

/// Four-action grid with slip noise. The goal cell routes every action
/// into an absorbing sink, paying the goal reward on that step; every
/// other step costs `step_cost`. Start is the top-left cell, the goal is
/// the bottom-right cell.
EnvDescriptor make_gridworld(int width, int height, double goal_reward,
                             double step_cost, double slip, double gamma = 0.99);

/// Linear chain with forward/back actions; entering the far terminal pays
/// `fwd_reward`. Back at the first state is a self-loop.
EnvDescriptor make_chain(int n, double fwd_reward, double gamma = 0.9);

/// Dense random MDP: transition rows are normalized uniform draws,
/// rewards are uniform in [-reward_scale, reward_scale], no terminals,
/// uniform start distribution. Deterministic for a fixed seed.
EnvDescriptor make_random_mdp(int n_states, int n_actions, std::uint64_t seed,
                              double reward_scale, double gamma = 0.95);

}  // namespace poisonlab
