#pragma once

#include <cstdint>
#include <string>

namespace prd::algo {

enum class Algorithm {
  kPrdAc,
  kSharedAcGae,
  kSharedAcMc,
  kGreedyAc,
  kGlobalGae,
  kComa,
  kComaIndiv,
};

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

// True for the variants trained with the counterfactual Q critic.
bool uses_coma_critic(Algorithm a);

struct EpsilonSchedule {
  double epsilon_max = 0.01;
  std::int64_t ramp_episodes = 15000;

  void validate() const;
};

// Linear ramp from 0 at episode 0 to epsilon_max at ramp_episodes.
double epsilon(const EpsilonSchedule& schedule, std::int64_t episode);

}  // namespace prd::algo
