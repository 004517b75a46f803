#pragma once

#include <cstdint>

#include "prd/core/types.hpp"
#include "prd/envs/environment.hpp"
#include "prd/nets/actor.hpp"
#include "prd/nets/attention_critic.hpp"

namespace prd {

struct RolloutOptions {
  // Take the most likely action instead of sampling.
  bool greedy = false;
};

// Runs one episode of cfg.horizon steps. Actions are sampled from the actor's
// categorical distributions with a stream keyed by seed; the reset uses the
// same seed. When a critic is given, its value and attention matrices are
// cached for every visited state. The same inputs always give a bitwise
// identical Episode.
Episode rollout(const envs::Environment& env, const nets::ActorNetwork& actor,
                const nets::AttentionCritic* critic, const MmdpConfig& cfg, std::uint64_t seed,
                const RolloutOptions& options = {});

// Policy distributions at every state of an episode (horizon + 1 entries).
std::vector<PolicyDistribution> episode_policies(const nets::ActorNetwork& actor, const Episode& ep);

// Recomputes and stores the critic outputs of an episode.
void attach_critic_outputs(Episode& ep, const nets::AttentionCritic& critic,
                           const std::vector<PolicyDistribution>& policies);

// Critic inputs for every state of an episode; the terminal one uses policies
// in place of actions.
std::vector<nets::CriticInput> critic_inputs(const Episode& ep, const std::vector<PolicyDistribution>& policies);

}  // namespace prd
