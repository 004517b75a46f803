#include "prd/estimators/estimators.hpp"

#include <cmath>

#include "prd/core/error.hpp"

namespace prd::est {

namespace {
void check_lengths(std::span<const double> rewards, std::span<const double> values, const char* op) {
  require(values.size() == rewards.size() + 1, std::string(op) + ": values must have length T + 1");
}
}  // namespace

void EstimatorConfig::validate() const {
  require(gamma > 0.0 && gamma <= 1.0, "EstimatorConfig: gamma must lie in (0, 1]");
  require(lambda_gae >= 0.0 && lambda_gae <= 1.0, "EstimatorConfig: lambda_gae must lie in [0, 1]");
  require(lambda_td >= 0.0 && lambda_td <= 1.0, "EstimatorConfig: lambda_td must lie in [0, 1]");
  require(huber_delta > 0.0, "EstimatorConfig: huber_delta must be positive");
}

std::vector<double> gae(std::span<const double> rewards, std::span<const double> values, double gamma,
                        double lambda) {
  check_lengths(rewards, values, "gae");
  const std::size_t n = rewards.size();
  std::vector<double> adv(n);
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double delta = rewards[t] + gamma * values[t + 1] - values[t];
    running = delta + gamma * lambda * running;
    adv[t] = running;
  }
  return adv;
}

std::vector<double> mc_advantage(std::span<const double> rewards, std::span<const double> values, double gamma) {
  check_lengths(rewards, values, "mc_advantage");
  const std::size_t n = rewards.size();
  std::vector<double> adv(n);
  double ret = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    ret = rewards[t] + gamma * ret;
    adv[t] = ret - values[t];
  }
  return adv;
}

std::vector<double> td_lambda_targets(std::span<const double> rewards, std::span<const double> values,
                                      double gamma, double lambda) {
  std::vector<double> g = gae(rewards, values, gamma, lambda);
  for (std::size_t t = 0; t < g.size(); ++t) g[t] += values[t];
  return g;
}

double coma_advantage(std::span<const double> q_row, std::span<const double> policy, int action) {
  require(q_row.size() == policy.size(), "coma_advantage: q and policy lengths differ");
  require(action >= 0 && static_cast<std::size_t>(action) < q_row.size(), "coma_advantage: action out of range");
  double expected = 0.0;
  for (std::size_t a = 0; a < q_row.size(); ++a) expected += policy[a] * q_row[a];
  return q_row[action] - expected;
}

}  // namespace prd::est
