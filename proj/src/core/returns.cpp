#include "prd/core/returns.hpp"

#include "prd/core/error.hpp"

namespace prd {

double discounted_group_return(const Episode& ep, double gamma) {
  // Summed per agent so the result equals the sum of per-agent returns with
  // the same rounding.
  double total = 0.0;
  for (int j = 0; j < ep.num_agents; ++j) total += discounted_agent_return(ep, j, 0, gamma);
  return total;
}

double discounted_agent_return(const Episode& ep, int agent, int t, double gamma) {
  require(agent >= 0 && agent < ep.num_agents, "discounted_agent_return: agent index out of range");
  require(t >= 0 && t < ep.horizon, "discounted_agent_return: start time out of range");
  // Backward accumulation: G_t = r_t + gamma * G_{t+1}.
  double g = 0.0;
  for (int tau = ep.horizon - 1; tau >= t; --tau) g = ep.reward(tau, agent) + gamma * g;
  return g;
}

}  // namespace prd
