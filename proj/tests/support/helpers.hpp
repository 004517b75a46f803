#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>

#include "prd/core/rng.hpp"
#include "prd/core/types.hpp"

namespace prd::test {

inline JointState random_state(int m, CounterRng& rng, double half_width = 1.0) {
  JointState s;
  s.agents.resize(m);
  for (auto& a : s.agents) {
    a.position = {rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width)};
    a.velocity = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    a.goal = {rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width)};
  }
  return s;
}

inline JointAction random_action(int m, CounterRng& rng, int n_actions = kNumActions) {
  JointAction a;
  for (int i = 0; i < m; ++i) a.actions.push_back(static_cast<int>(rng.below(n_actions)));
  return a;
}

inline PolicyDistribution random_policies(int m, CounterRng& rng, int n_actions = kNumActions) {
  PolicyDistribution p(m, n_actions);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n_actions; ++k) p(i, k) = rng.uniform(0.05, 1.0);
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, CounterRng& rng, double lo = -1, double hi = 1) {
  Eigen::MatrixXd x(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) x(r, c) = rng.uniform(lo, hi);
  }
  return x;
}

// Random episode with (optionally) random critic outputs; attention columns
// are normalized.
inline Episode random_episode(int m, int horizon, CounterRng& rng, bool with_critic = true) {
  Episode ep;
  ep.num_agents = m;
  ep.horizon = horizon;
  for (int t = 0; t <= horizon; ++t) ep.states.push_back(random_state(m, rng));
  ep.log_probs = Eigen::MatrixXd::Constant(horizon, m, std::log(1.0 / kNumActions));
  for (int t = 0; t < horizon; ++t) {
    ep.actions.push_back(random_action(m, rng));
    RewardVector r;
    for (int i = 0; i < m; ++i) r.rewards.push_back(rng.uniform(-1, 1));
    ep.rewards.push_back(r);
  }
  if (with_critic) {
    for (int t = 0; t <= horizon; ++t) ep.value_matrices.push_back(random_matrix(m, m, rng, -2, 2));
    for (int t = 0; t < horizon; ++t) {
      Eigen::MatrixXd w = random_matrix(m, m, rng, 0.0, 1.0);
      for (int j = 0; j < m; ++j) w.col(j) /= w.col(j).sum();
      ep.attention_matrices.push_back(w);
    }
  }
  return ep;
}

// Central differences of f around x (x is restored on return).
inline Eigen::VectorXd central_difference(const std::function<double()>& f, Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + h;
    const double up = f();
    x[k] = saved - h;
    const double down = f();
    x[k] = saved;
    g[k] = (up - down) / (2 * h);
  }
  return g;
}

// max_k |a_k - b_k| / max(|a_k|, |b_k|, floor). The floor keeps coordinates
// whose true derivative is ~0 from dividing finite-difference noise by zero.
inline double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-5) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double scale = std::max({std::abs(a[k]), std::abs(b[k]), floor});
    worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
  }
  return worst;
}

}  // namespace prd::test
