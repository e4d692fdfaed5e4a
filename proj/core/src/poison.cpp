#include "poisonlab/poison.hpp"

#include <stdexcept>

namespace poisonlab {

int apply_trigger(const TriggerScheme& scheme, int s) {
  if (s < 0 || s >= scheme.n_benign)
    throw std::out_of_range("apply_trigger: benign state index out of range");
  return s + scheme.n_benign;
}

int invert_trigger(const TriggerScheme& scheme, int sp) {
  if (sp < scheme.n_benign || sp >= scheme.total_states())
    throw std::out_of_range("invert_trigger: poisoned state index out of range");
  return sp - scheme.n_benign;
}

const char* to_string(AttackMode mode) {
  switch (mode) {
    case AttackMode::none: return "none";
    case AttackMode::static_inner: return "static_inner";
    case AttackMode::sleepernets_outer: return "sleepernets_outer";
  }
  return "unknown";
}

AttackMode attack_mode_from_string(const std::string& name) {
  if (name == "none") return AttackMode::none;
  if (name == "static_inner") return AttackMode::static_inner;
  if (name == "sleepernets_outer") return AttackMode::sleepernets_outer;
  throw std::invalid_argument("unknown attack mode: " + name);
}

PoisonedMdp make_poisoned_mdp(const Mdp& mdp, const TriggerScheme& scheme,
                              const AttackSpec& spec) {
  if (scheme.n_benign != mdp.n_states)
    throw std::invalid_argument("make_poisoned_mdp: trigger scheme does not match MDP");
  if (spec.beta < 0.0 || spec.beta > 1.0)
    throw std::invalid_argument("make_poisoned_mdp: beta must lie in [0,1]");
  if (spec.target_action < 0 || spec.target_action >= mdp.n_actions)
    throw std::invalid_argument("make_poisoned_mdp: target action out of range");
  if (auto v = validate(mdp))
    throw std::invalid_argument("make_poisoned_mdp: benign MDP invalid: " + v->message);
  return PoisonedMdp{mdp, scheme, spec};
}

double poisoned_transition(const PoisonedMdp& pm, int s, int a, int s2) {
  const int n = pm.scheme.n_benign;
  const int total = pm.scheme.total_states();
  if (s < 0 || s >= total || s2 < 0 || s2 >= total)
    throw std::out_of_range("poisoned_transition: state index out of range");
  const double beta = pm.spec.beta;
  const int src = pm.scheme.is_poisoned(s) ? s - n : s;
  const int dst = pm.scheme.is_poisoned(s2) ? s2 - n : s2;
  const double base = pm.benign.t(src, a, dst);
  return pm.scheme.is_poisoned(s2) ? beta * base : (1.0 - beta) * base;
}

double static_poisoned_reward(const AttackSpec& spec, int a) {
  return a == spec.target_action ? spec.c : -spec.c;
}

double dynamic_poisoned_reward(const PoisonedMdp& pm, int s, int a, int s2,
                               std::span<const double> values) {
  const int n = pm.scheme.n_benign;
  const int total = pm.scheme.total_states();
  if (values.size() != static_cast<std::size_t>(total))
    throw std::invalid_argument("dynamic_poisoned_reward: value table has wrong size");
  if (s < 0 || s >= total || s2 < 0 || s2 >= total)
    throw std::out_of_range("dynamic_poisoned_reward: state index out of range");
  const double gamma = pm.benign.gamma;

  if (pm.scheme.is_poisoned(s)) {
    const double indicator = (a == pm.spec.target_action) ? 1.0 : 0.0;
    return indicator - gamma * values[static_cast<std::size_t>(s2)];
  }
  if (pm.scheme.is_poisoned(s2)) {
    const int twin = s2 - n;
    return pm.benign.r(s, a, twin) - gamma * values[static_cast<std::size_t>(s2)] +
           gamma * values[static_cast<std::size_t>(twin)];
  }
  return pm.benign.r(s, a, s2);
}

Mdp build_static_poisoned_mdp(const Mdp& mdp, const TriggerScheme& scheme,
                              const AttackSpec& spec) {
  if (auto v = validate(mdp))
    throw std::invalid_argument("build_static_poisoned_mdp: " + v->message);
  if (scheme.n_benign != mdp.n_states)
    throw std::invalid_argument("build_static_poisoned_mdp: scheme does not match MDP");
  if (spec.beta < 0.0 || spec.beta > 1.0)
    throw std::invalid_argument("build_static_poisoned_mdp: beta must lie in [0,1]");

  const int n = mdp.n_states;
  const double beta = spec.beta;
  Mdp out = Mdp::zeros(2 * n, mdp.n_actions, mdp.gamma);
  out.horizon = mdp.horizon;

  for (int s = 0; s < n; ++s) {
    if (mdp.is_terminal(s)) {
      // Episodes never step out of a terminal, so both copies stay
      // absorbing with zero reward.
      out.terminal[s] = 1;
      out.terminal[n + s] = 1;
      for (int a = 0; a < mdp.n_actions; ++a) {
        out.t_ref(s, a, s) = 1.0;
        out.t_ref(n + s, a, n + s) = 1.0;
      }
      continue;
    }
    for (int a = 0; a < mdp.n_actions; ++a) {
      const double poison_reward = static_poisoned_reward(spec, a);
      for (int s2 = 0; s2 < n; ++s2) {
        const double p = mdp.t(s, a, s2);
        if (p == 0.0) continue;
        const double r = mdp.r(s, a, s2);
        // benign source: split mass between the benign and poisoned copy
        // of the successor, keeping the benign reward on both.
        out.t_ref(s, a, s2) = (1.0 - beta) * p;
        out.r_ref(s, a, s2) = r;
        out.t_ref(s, a, n + s2) = beta * p;
        out.r_ref(s, a, n + s2) = r;
        // poisoned source: same dynamics, fixed +/-c reward.
        out.t_ref(n + s, a, s2) = (1.0 - beta) * p;
        out.r_ref(n + s, a, s2) = poison_reward;
        out.t_ref(n + s, a, n + s2) = beta * p;
        out.r_ref(n + s, a, n + s2) = poison_reward;
      }
    }
  }

  for (int s = 0; s < n; ++s) {
    out.initial_dist[s] = (1.0 - beta) * mdp.initial_dist[s];
    out.initial_dist[n + s] = beta * mdp.initial_dist[s];
  }
  return out;
}

}  // namespace poisonlab
