#include "poisonlab/envs.hpp"

#include <stdexcept>

#include "poisonlab/rng.hpp"

namespace poisonlab {

namespace {

EnvDescriptor finish(std::string name, Mdp mdp, std::string notes) {
  if (auto v = validate(mdp))
    throw std::logic_error("environment '" + name + "' failed validation: " + v->message);
  TriggerScheme scheme{mdp.n_states};
  return EnvDescriptor{std::move(name), std::move(mdp), scheme, std::move(notes)};
}

}  // namespace

EnvDescriptor make_m1(double c, double gamma) {
  if (!(c > 0.0)) throw std::invalid_argument("make_m1: c must be > 0");
  // states: 0 = Start, 1 = Survive, 2 = terminal; actions: 0 = target, 1 = survive
  Mdp m = Mdp::zeros(3, 2, gamma);
  m.t_ref(0, 0, 2) = 1.0;
  m.t_ref(0, 1, 1) = 1.0;
  m.t_ref(1, 0, 1) = 1.0;
  m.t_ref(1, 1, 1) = 1.0;
  m.t_ref(2, 0, 2) = 1.0;
  m.t_ref(2, 1, 2) = 1.0;
  m.terminal[2] = 1;
  m.initial_dist[0] = 1.0;
  return finish("m1", std::move(m),
                "survival counterexample, reward constant c = " + std::to_string(c));
}

EnvDescriptor make_m1_attack(double c, double exit_reward, double gamma) {
  auto env = make_m1(c, gamma);
  env.mdp.r_ref(0, 0, 2) = exit_reward;
  env.name = "m1_attack";
  env.notes = "survival counterexample with exit reward " + std::to_string(exit_reward) +
              " for end-to-end runs";
  if (auto v = validate(env.mdp))
    throw std::logic_error("m1_attack failed validation: " + v->message);
  return env;
}

EnvDescriptor make_m2(double c, double gamma) {
  if (!(c > 0.0)) throw std::invalid_argument("make_m2: c must be > 0");
  // states: 0 = Start, 1 = fast hop, 2/3 = slow hops, 4 = Finish;
  // actions: 0 = fast (target), 1 = slow
  Mdp m = Mdp::zeros(5, 2, gamma);
  m.t_ref(0, 0, 1) = 1.0;
  m.t_ref(0, 1, 2) = 1.0;
  for (int a = 0; a < 2; ++a) {
    m.t_ref(1, a, 4) = 1.0;
    m.r_ref(1, a, 4) = c;
    m.t_ref(2, a, 3) = 1.0;
    m.t_ref(3, a, 4) = 1.0;
    m.r_ref(3, a, 4) = c;
    m.t_ref(4, a, 4) = 1.0;
  }
  m.terminal[4] = 1;
  m.initial_dist[0] = 1.0;
  return finish("m2", std::move(m), "two-path stealth counterexample");
}

EnvDescriptor make_gridworld(int width, int height, double goal_reward,
                             double step_cost, double slip, double gamma) {
  if (width < 1 || height < 1 || width * height > 64)
    throw std::invalid_argument("make_gridworld: width*height must lie in [1,64]");
  if (slip < 0.0 || slip >= 0.5)
    throw std::invalid_argument("make_gridworld: slip must lie in [0, 0.5)");

  const int cells = width * height;
  const int goal = cells - 1;
  const int sink = cells;  // absorbing state entered from the goal
  Mdp m = Mdp::zeros(cells + 1, 4, gamma);

  // action -> (dx, dy): up, right, down, left
  const int dx[4] = {0, 1, 0, -1};
  const int dy[4] = {-1, 0, 1, 0};
  auto move = [&](int cell, int a) {
    const int x = cell % width;
    const int y = cell / width;
    const int nx = x + dx[a];
    const int ny = y + dy[a];
    if (nx < 0 || nx >= width || ny < 0 || ny >= height) return cell;
    return ny * width + nx;
  };

  for (int cell = 0; cell < cells; ++cell) {
    if (cell == goal) {
      for (int a = 0; a < 4; ++a) {
        m.t_ref(goal, a, sink) = 1.0;
        m.r_ref(goal, a, sink) = goal_reward - step_cost;
      }
      continue;
    }
    for (int a = 0; a < 4; ++a) {
      const int lateral_a = (a % 2 == 0) ? 1 : 0;  // perpendicular axis
      const int lateral_b = lateral_a + 2;
      // accumulate because slips can land on the same cell (e.g. walls)
      m.t_ref(cell, a, move(cell, a)) += 1.0 - slip;
      m.t_ref(cell, a, move(cell, lateral_a)) += slip / 2.0;
      m.t_ref(cell, a, move(cell, lateral_b)) += slip / 2.0;
      for (int s2 = 0; s2 <= cells; ++s2) {
        if (m.t(cell, a, s2) > 0.0) m.r_ref(cell, a, s2) = -step_cost;
      }
    }
  }
  for (int a = 0; a < 4; ++a) m.t_ref(sink, a, sink) = 1.0;
  m.terminal[sink] = 1;
  m.initial_dist[0] = 1.0;
  return finish("gridworld", std::move(m),
                std::to_string(width) + "x" + std::to_string(height) + " grid, slip " +
                    std::to_string(slip));
}

EnvDescriptor make_chain(int n, double fwd_reward, double gamma) {
  if (n < 2) throw std::invalid_argument("make_chain: need at least 2 states");
  Mdp m = Mdp::zeros(n, 2, gamma);
  for (int s = 0; s < n - 1; ++s) {
    m.t_ref(s, 0, s + 1) = 1.0;
    if (s + 1 == n - 1) m.r_ref(s, 0, s + 1) = fwd_reward;
    m.t_ref(s, 1, s > 0 ? s - 1 : 0) = 1.0;
  }
  m.t_ref(n - 1, 0, n - 1) = 1.0;
  m.t_ref(n - 1, 1, n - 1) = 1.0;
  m.terminal[static_cast<std::size_t>(n - 1)] = 1;
  m.initial_dist[0] = 1.0;
  return finish("chain", std::move(m), std::to_string(n) + "-state chain");
}

EnvDescriptor make_random_mdp(int n_states, int n_actions, std::uint64_t seed,
                              double reward_scale, double gamma) {
  if (n_states < 1 || n_states > 16)
    throw std::invalid_argument("make_random_mdp: n_states must lie in [1,16]");
  if (n_actions < 1 || n_actions > 4)
    throw std::invalid_argument("make_random_mdp: n_actions must lie in [1,4]");

  Rng rng(mix_seed(seed, 0x7a6d));
  Mdp m = Mdp::zeros(n_states, n_actions, gamma);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      double sum = 0.0;
      std::vector<double> row(static_cast<std::size_t>(n_states));
      for (int s2 = 0; s2 < n_states; ++s2) {
        row[static_cast<std::size_t>(s2)] = 1.0 - rng.uniform();  // (0,1], keeps rows non-degenerate
        sum += row[static_cast<std::size_t>(s2)];
      }
      for (int s2 = 0; s2 < n_states; ++s2) {
        m.t_ref(s, a, s2) = row[static_cast<std::size_t>(s2)] / sum;
        m.r_ref(s, a, s2) = reward_scale * (2.0 * rng.uniform() - 1.0);
      }
    }
  }
  for (int s = 0; s < n_states; ++s) m.initial_dist[s] = 1.0 / n_states;
  return finish("random", std::move(m),
                "dense random MDP, seed " + std::to_string(seed));
}

}  // namespace poisonlab
