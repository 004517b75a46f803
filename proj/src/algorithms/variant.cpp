#include "prd/algorithms/variant.hpp"

#include <algorithm>

#include "prd/core/error.hpp"

namespace prd::algo {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kPrdAc: return "prd_ac";
    case Algorithm::kSharedAcGae: return "shared_ac_gae";
    case Algorithm::kSharedAcMc: return "shared_ac_mc";
    case Algorithm::kGreedyAc: return "greedy_ac";
    case Algorithm::kGlobalGae: return "global_gae";
    case Algorithm::kComa: return "coma";
    case Algorithm::kComaIndiv: return "coma_indiv";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (Algorithm a : {Algorithm::kPrdAc, Algorithm::kSharedAcGae, Algorithm::kSharedAcMc, Algorithm::kGreedyAc,
                      Algorithm::kGlobalGae, Algorithm::kComa, Algorithm::kComaIndiv}) {
    if (to_string(a) == name) return a;
  }
  throw ContractViolation("unknown algorithm: " + name);
}

bool uses_coma_critic(Algorithm a) { return a == Algorithm::kComa || a == Algorithm::kComaIndiv; }

void EpsilonSchedule::validate() const {
  require(epsilon_max >= 0.0, "EpsilonSchedule: epsilon_max must be nonnegative");
  require(ramp_episodes >= 1, "EpsilonSchedule: ramp_episodes must be >= 1");
}

double epsilon(const EpsilonSchedule& schedule, std::int64_t episode) {
  require(episode >= 0, "epsilon: episode must be nonnegative");
  if (episode >= schedule.ramp_episodes) return schedule.epsilon_max;
  return std::min(schedule.epsilon_max,
                  schedule.epsilon_max * static_cast<double>(episode) / static_cast<double>(schedule.ramp_episodes));
}

}  // namespace prd::algo
