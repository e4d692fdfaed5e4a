#include "poisonlab/dp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace poisonlab {

namespace {

constexpr long kMaxSweeps = 2'000'000;

double stop_threshold(double tol, double gamma) {
  return gamma > 0.0 ? tol * (1.0 - gamma) / gamma : tol;
}

void require_valid(const Mdp& mdp, const char* op) {
  if (auto v = validate(mdp))
    throw std::invalid_argument(std::string(op) + ": MDP invalid: " + v->message);
}

void require_policy_dims(const PolicyTable& policy, int n_states, int n_actions,
                         const char* op) {
  if (policy.n_states != n_states || policy.n_actions != n_actions)
    throw std::invalid_argument(std::string(op) + ": policy dimensions mismatch");
}

}  // namespace

ValueTable policy_evaluation(const Mdp& mdp, const PolicyTable& policy, double tol) {
  require_valid(mdp, "policy_evaluation");
  require_policy_dims(policy, mdp.n_states, mdp.n_actions, "policy_evaluation");
  if (!(tol > 0.0)) throw std::invalid_argument("policy_evaluation: tol must be > 0");

  const int n = mdp.n_states;
  const double threshold = stop_threshold(tol, mdp.gamma);
  std::vector<double> v(n, 0.0);
  std::vector<double> next(n, 0.0);

  for (long sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double diff = 0.0;
    for (int s = 0; s < n; ++s) {
      double acc = 0.0;
      for (int a = 0; a < mdp.n_actions; ++a) {
        const double pa = policy.at(s, a);
        if (pa == 0.0) continue;
        double qa = 0.0;
        for (int s2 = 0; s2 < n; ++s2) {
          const double p = mdp.t(s, a, s2);
          if (p == 0.0) continue;
          qa += p * (mdp.r(s, a, s2) + mdp.gamma * v[s2]);
        }
        acc += pa * qa;
      }
      next[s] = acc;
      diff = std::max(diff, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (diff <= threshold) return ValueTable{std::move(v)};
  }
  throw std::runtime_error("policy_evaluation: did not converge");
}

QTable q_from_values(const Mdp& mdp, const ValueTable& values) {
  if (values.size() != mdp.n_states)
    throw std::invalid_argument("q_from_values: value table dimension mismatch");
  QTable q;
  q.n_states = mdp.n_states;
  q.n_actions = mdp.n_actions;
  q.q.assign(static_cast<std::size_t>(mdp.n_states) * mdp.n_actions, 0.0);
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      double acc = 0.0;
      for (int s2 = 0; s2 < mdp.n_states; ++s2) {
        const double p = mdp.t(s, a, s2);
        if (p == 0.0) continue;
        acc += p * (mdp.r(s, a, s2) + mdp.gamma * values.at(s2));
      }
      q.at(s, a) = acc;
    }
  }
  return q;
}

ViResult value_iteration(const Mdp& mdp, double tol) {
  require_valid(mdp, "value_iteration");
  if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be > 0");

  const int n = mdp.n_states;
  const double threshold = stop_threshold(tol, mdp.gamma);
  std::vector<double> v(n, 0.0);
  std::vector<double> next(n, 0.0);

  for (long sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double diff = 0.0;
    for (int s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.n_actions; ++a) {
        double qa = 0.0;
        for (int s2 = 0; s2 < n; ++s2) {
          const double p = mdp.t(s, a, s2);
          if (p == 0.0) continue;
          qa += p * (mdp.r(s, a, s2) + mdp.gamma * v[s2]);
        }
        if (qa > best) best = qa;
      }
      next[s] = best;
      diff = std::max(diff, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (diff <= threshold) break;
    if (sweep + 1 == kMaxSweeps)
      throw std::runtime_error("value_iteration: did not converge");
  }

  // Greedy extraction; strict improvement keeps the lowest action index on ties.
  std::vector<int> greedy(n, 0);
  for (int s = 0; s < n; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.n_actions; ++a) {
      double qa = 0.0;
      for (int s2 = 0; s2 < n; ++s2) {
        const double p = mdp.t(s, a, s2);
        if (p == 0.0) continue;
        qa += p * (mdp.r(s, a, s2) + mdp.gamma * v[s2]);
      }
      if (qa > best) {
        best = qa;
        greedy[s] = a;
      }
    }
  }
  return ViResult{ValueTable{std::move(v)},
                  PolicyTable::deterministic(greedy, mdp.n_actions)};
}

std::vector<ValueTable> finite_horizon_evaluation(const Mdp& mdp,
                                                  const PolicyTable& policy, int H) {
  require_valid(mdp, "finite_horizon_evaluation");
  require_policy_dims(policy, mdp.n_states, mdp.n_actions, "finite_horizon_evaluation");
  if (H < 1) throw std::invalid_argument("finite_horizon_evaluation: H must be >= 1");

  const int n = mdp.n_states;
  std::vector<ValueTable> tables(static_cast<std::size_t>(H));
  std::vector<double> ahead(n, 0.0);  // boundary: zero beyond the horizon
  for (int t = H; t >= 1; --t) {
    std::vector<double> cur(n, 0.0);
    for (int s = 0; s < n; ++s) {
      double acc = 0.0;
      for (int a = 0; a < mdp.n_actions; ++a) {
        const double pa = policy.at(s, a);
        if (pa == 0.0) continue;
        double qa = 0.0;
        for (int s2 = 0; s2 < n; ++s2) {
          const double p = mdp.t(s, a, s2);
          if (p == 0.0) continue;
          qa += p * (mdp.r(s, a, s2) + mdp.gamma * ahead[s2]);
        }
        acc += pa * qa;
      }
      cur[s] = acc;
    }
    tables[static_cast<std::size_t>(t - 1)].values = cur;
    ahead = std::move(cur);
  }
  return tables;
}

namespace {

// One synchronous backup of the adversarial Bellman operator, substituting
// the supplied iterate into the reward's branches. The branch expressions
// are written out here (rather than routed through poisoned_transition /
// dynamic_poisoned_reward) to keep the enumeration workloads fast; the
// fixed-point consistency of the public per-element functions against this
// loop is covered by tests.
void poisoned_backup(const PoisonedMdp& pm, const PolicyTable& policy,
                     const std::vector<double>& v, std::vector<double>& out) {
  const int n = pm.scheme.n_benign;
  const int n_actions = pm.benign.n_actions;
  const double gamma = pm.benign.gamma;
  const double beta = pm.spec.beta;
  const int target = pm.spec.target_action;
  const Mdp& m = pm.benign;

  for (int s = 0; s < 2 * n; ++s) {
    const bool poisoned_src = s >= n;
    const int src = poisoned_src ? s - n : s;
    double acc = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      const double pa = policy.at(s, a);
      if (pa == 0.0) continue;
      double qa = 0.0;
      if (poisoned_src) {
        const double indicator = (a == target) ? 1.0 : 0.0;
        for (int t = 0; t < n; ++t) {
          const double base = m.t(src, a, t);
          if (base == 0.0) continue;
          const double r_benign = indicator - gamma * v[t];
          qa += (1.0 - beta) * base * (r_benign + gamma * v[t]);
          const double r_poison = indicator - gamma * v[n + t];
          qa += beta * base * (r_poison + gamma * v[n + t]);
        }
      } else {
        for (int t = 0; t < n; ++t) {
          const double base = m.t(src, a, t);
          if (base == 0.0) continue;
          const double r = m.r(src, a, t);
          qa += (1.0 - beta) * base * (r + gamma * v[t]);
          const double r_poison = r - gamma * v[n + t] + gamma * v[t];
          qa += beta * base * (r_poison + gamma * v[n + t]);
        }
      }
      acc += pa * qa;
    }
    out[static_cast<std::size_t>(s)] = acc;
  }
}

}  // namespace

ValueTable poisoned_policy_evaluation(const PoisonedMdp& pm, const PolicyTable& policy,
                                      double tol) {
  const int total = pm.total_states();
  require_policy_dims(policy, total, pm.benign.n_actions, "poisoned_policy_evaluation");
  if (!(tol > 0.0))
    throw std::invalid_argument("poisoned_policy_evaluation: tol must be > 0");

  const double threshold = stop_threshold(tol, pm.benign.gamma);
  std::vector<double> v(static_cast<std::size_t>(total), 0.0);
  std::vector<double> next(static_cast<std::size_t>(total), 0.0);

  for (long sweep = 0; sweep < kMaxSweeps; ++sweep) {
    poisoned_backup(pm, policy, v, next);
    double diff = 0.0;
    for (int s = 0; s < total; ++s)
      diff = std::max(diff, std::abs(next[s] - v[s]));
    v.swap(next);
    if (diff <= threshold) return ValueTable{std::move(v)};
  }
  throw std::runtime_error(
      "poisoned_policy_evaluation: did not converge (malformed poisoned MDP?)");
}

std::vector<ValueTable> poisoned_finite_horizon_evaluation(const PoisonedMdp& pm,
                                                           const PolicyTable& policy,
                                                           int H) {
  const int total = pm.total_states();
  require_policy_dims(policy, total, pm.benign.n_actions,
                      "poisoned_finite_horizon_evaluation");
  if (H < 1)
    throw std::invalid_argument("poisoned_finite_horizon_evaluation: H must be >= 1");

  std::vector<ValueTable> tables(static_cast<std::size_t>(H));
  std::vector<double> ahead(static_cast<std::size_t>(total), 0.0);
  std::vector<double> cur(static_cast<std::size_t>(total), 0.0);
  for (int t = H; t >= 1; --t) {
    poisoned_backup(pm, policy, ahead, cur);
    tables[static_cast<std::size_t>(t - 1)].values = cur;
    ahead = cur;
  }
  return tables;
}

BruteForceResult brute_force_optimal(const PoisonedMdp& pm, double tol) {
  const int total = pm.total_states();
  const int n_actions = pm.benign.n_actions;

  double count = 1.0;
  for (int s = 0; s < total; ++s) {
    count *= n_actions;
    if (count > 1e6)
      throw std::length_error("brute_force_optimal: |A|^(2|S|) exceeds the enumeration guard");
  }
  const long n_policies = static_cast<long>(count);

  auto assignment = [&](long index) {
    std::vector<int> actions(static_cast<std::size_t>(total));
    for (int s = 0; s < total; ++s) {
      actions[static_cast<std::size_t>(s)] = static_cast<int>(index % n_actions);
      index /= n_actions;
    }
    return actions;
  };

  // Pass 1: per-state maxima over all deterministic policies.
  std::vector<double> vmax(static_cast<std::size_t>(total),
                           -std::numeric_limits<double>::infinity());
  for (long k = 0; k < n_policies; ++k) {
    const auto pol = PolicyTable::deterministic(assignment(k), n_actions);
    const auto v = poisoned_policy_evaluation(pm, pol, tol);
    for (int s = 0; s < total; ++s)
      vmax[static_cast<std::size_t>(s)] = std::max(vmax[static_cast<std::size_t>(s)], v.at(s));
  }

  // Pass 2: first policy matching the per-state maxima everywhere.
  const double slack = std::max(100.0 * tol, 1e-9);
  for (long k = 0; k < n_policies; ++k) {
    const auto actions = assignment(k);
    const auto pol = PolicyTable::deterministic(actions, n_actions);
    const auto v = poisoned_policy_evaluation(pm, pol, tol);
    bool dominant = true;
    for (int s = 0; s < total && dominant; ++s)
      dominant = v.at(s) >= vmax[static_cast<std::size_t>(s)] - slack;
    if (!dominant) continue;

    for (int s = pm.scheme.n_benign; s < total; ++s) {
      if (actions[static_cast<std::size_t>(s)] != pm.spec.target_action)
        throw std::runtime_error(
            "brute_force_optimal: dominating policy does not play the target action in "
            "poisoned state " + std::to_string(s));
    }
    return BruteForceResult{pol, v};
  }

  // No simultaneous dominator: report where the maxima come apart.
  std::string detail = "brute_force_optimal: no policy dominates at every state;";
  detail += " per-state maxima are attained by different policies";
  throw std::runtime_error(detail);
}

}  // namespace poisonlab
