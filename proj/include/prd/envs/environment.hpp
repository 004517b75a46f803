#pragma once

#include <cstdint>

#include "prd/core/types.hpp"
#include "prd/envs/env_spec.hpp"

namespace prd::envs {

JointState reset(const EnvSpec& spec, std::uint64_t seed);

// Point-mass kinematics with wall clamping. Not used by synthetic_decoupled.
JointState dynamics_step(const JointState& state, const JointAction& action, const EnvSpec& spec);

RewardVector reward(const JointState& prev, const JointAction& action, const JointState& next,
                    const EnvSpec& spec);

struct StepResult {
  JointState next;
  RewardVector rewards;
};

// Every agent drifts on its own circle regardless of actions, and
// r_i = dir(a_i) . unit(goal_i - position_i). No agent's action can reach
// another agent's reward or observations.
StepResult synthetic_decoupled_step(const JointState& state, const JointAction& action,
                                    const EnvSpec& spec);

// Unordered pairs (i < j) closer than the collision radius.
std::vector<std::pair<int, int>> collision_events(const JointState& state, const EnvSpec& spec);

bool in_region(Vec2 p, const GoalRegion& region);

class Environment {
 public:
  explicit Environment(EnvSpec spec);

  const EnvSpec& spec() const { return spec_; }
  int num_agents() const { return spec_.num_agents; }
  int horizon() const { return spec_.horizon; }

  JointState reset(std::uint64_t seed) const;
  StepResult step(const JointState& state, const JointAction& action) const;

 private:
  EnvSpec spec_;
};

}  // namespace prd::envs
