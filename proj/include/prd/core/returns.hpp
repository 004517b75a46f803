#pragma once

#include "prd/core/types.hpp"

namespace prd {

// sum_t sum_j gamma^t r_t^(j), accumulated agent by agent.
double discounted_group_return(const Episode& ep, double gamma);

// sum_{tau >= t} gamma^(tau - t) r_tau^(j).
double discounted_agent_return(const Episode& ep, int agent, int t, double gamma);

}  // namespace prd
