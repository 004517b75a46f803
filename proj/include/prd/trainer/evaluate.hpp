#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prd/envs/env_spec.hpp"
#include "prd/envs/environment.hpp"
#include "prd/nets/actor.hpp"
#include "prd/nets/checkpoint.hpp"

namespace prd::train {

struct EvalSummary {
  std::int64_t episodes = 0;
  double mean_group_reward = 0.0;
  double std_group_reward = 0.0;  // sample standard deviation; 0 for fewer than 2 episodes
  std::vector<double> group_rewards;

  friend bool operator==(const EvalSummary&, const EvalSummary&) = default;
};

// Episode k is reset and sampled from episode_stream_key(seed, k). Greedy
// takes the argmax action; otherwise actions are sampled from the policy.
EvalSummary evaluate(const nets::ActorNetwork& actor, const envs::Environment& env, std::int64_t n_episodes,
                     std::uint64_t seed, bool greedy = true);

// Uses the checkpoint's embedded environment unless one is given.
EvalSummary evaluate(const nets::Checkpoint& ckpt, const std::optional<envs::EnvSpec>& env,
                     std::int64_t n_episodes, std::uint64_t seed, bool greedy = true);

// Stochastic rollouts of the uniform policy (an actor with every parameter
// zero, hence all-zero logits).
EvalSummary random_policy_baseline(const envs::Environment& env, std::int64_t n_episodes, std::uint64_t seed);

EvalSummary summarize(std::vector<double> group_rewards);

}  // namespace prd::train
