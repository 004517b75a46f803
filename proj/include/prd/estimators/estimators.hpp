#pragma once

#include <span>
#include <vector>

namespace prd::est {

struct EstimatorConfig {
  double gamma = 0.99;
  double lambda_gae = 0.98;
  double lambda_td = 0.8;
  double huber_delta = 1.0;
  // Standardize the actor's per-(t, i) advantage weights within an episode.
  bool normalize_advantages = false;

  void validate() const;
};

// All sequence estimators take values of length T + 1; values[T] is the
// bootstrap beyond the last reward and is 0 for episodic tasks.

// A_t = sum_l (gamma lambda)^l delta_{t+l}, delta_t = r_t + gamma v_{t+1} - v_t.
std::vector<double> gae(std::span<const double> rewards, std::span<const double> values, double gamma,
                        double lambda);

// A_t = sum_{tau >= t} gamma^(tau - t) r_tau - v_t.
std::vector<double> mc_advantage(std::span<const double> rewards, std::span<const double> values, double gamma);

// Forward-view lambda-return, G_t = v_t + gae(lambda)_t.
std::vector<double> td_lambda_targets(std::span<const double> rewards, std::span<const double> values,
                                      double gamma, double lambda);

// q[a] - sum_a' policy[a'] q[a'].
double coma_advantage(std::span<const double> q_row, std::span<const double> policy, int action);

}  // namespace prd::est
