#pragma once

#include <span>
#include <string>

#include "poisonlab/mdp.hpp"

namespace poisonlab {

/// Bijection between benign states [0, n_benign) and their poisoned
/// (trigger-embedded) counterparts [n_benign, 2*n_benign). Realizing the
/// trigger as an index offset makes the two state sets disjoint and the
/// mapping invertible by construction.
struct TriggerScheme {
  int n_benign = 0;

  bool is_poisoned(int s) const { return s >= n_benign; }
  int total_states() const { return 2 * n_benign; }
};

/// Poisoned counterpart of benign state `s`.
int apply_trigger(const TriggerScheme& scheme, int s);

/// Benign state that poisoned state `sp` was derived from.
int invert_trigger(const TriggerScheme& scheme, int sp);

enum class AttackMode { none, static_inner, sleepernets_outer };

const char* to_string(AttackMode mode);
AttackMode attack_mode_from_string(const std::string& name);

/// Adversary parameters shared by all attack variants.
struct AttackSpec {
  double beta = 0.0;              // poisoning budget/rate in [0,1]
  double alpha = 1.0;             // weighting factor on the value-cancellation term
  double c = 1.0;                 // reward constant
  int target_action = 0;          // action the backdoor should trigger
  AttackMode mode = AttackMode::none;
  double anneal_threshold = 1.0;  // skip poisoning once measured ASR reaches this
  // Carry unspent fractional budget beta*|H| across episodes instead of
  // flooring it away per episode; keeps outer-loop poisoning alive when
  // episodes are shorter than 1/beta while still spending at most a beta
  // fraction of steps overall.
  bool accumulate_budget = false;
};

/// Benign MDP paired with a trigger scheme and attack parameters; the
/// adversarial MDP over the doubled state space is defined by
/// poisoned_transition / dynamic_poisoned_reward on top of it.
struct PoisonedMdp {
  Mdp benign;
  TriggerScheme scheme;
  AttackSpec spec;

  int total_states() const { return scheme.total_states(); }
};

/// Validates dimensions and parameter ranges and bundles the pieces.
PoisonedMdp make_poisoned_mdp(const Mdp& mdp, const TriggerScheme& scheme,
                              const AttackSpec& spec);

/// Transition probability of the adversarial MDP over the doubled state
/// space: with probability beta the next observation is the poisoned copy
/// of the benign successor, with probability (1-beta) the benign one;
/// the underlying dynamics are always the benign MDP's.
double poisoned_transition(const PoisonedMdp& pm, int s, int a, int s2);

/// Fixed-value reward substitution: +c for the target action, -c otherwise.
double static_poisoned_reward(const AttackSpec& spec, int a);

/// Value-dependent reward of the adversarial MDP. `values` stands in for
/// the policy's value function over the doubled state space:
///   benign -> benign:    the benign reward, untouched;
///   benign -> poisoned:  benign reward - gamma*V(s') + gamma*V(benign twin of s');
///   poisoned source:     [a == target] - gamma*V(s').
/// The subtracted continuation terms are what make the target action
/// optimal in poisoned states without distorting benign values.
double dynamic_poisoned_reward(const PoisonedMdp& pm, int s, int a, int s2,
                               std::span<const double> values);

/// Materializes the statically poisoned MDP over the doubled state space
/// as an ordinary Mdp: transitions follow poisoned_transition, steps
/// originating in a poisoned state earn the fixed +/-c reward, and
/// benign-to-poisoned steps keep the benign reward. Terminal states and
/// their poisoned copies stay absorbing with zero reward, since no episode
/// step ever originates at a terminal.
Mdp build_static_poisoned_mdp(const Mdp& mdp, const TriggerScheme& scheme,
                              const AttackSpec& spec);

}  // namespace poisonlab
