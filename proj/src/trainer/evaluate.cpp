#include "prd/trainer/evaluate.hpp"

#include <cmath>
#include <exception>

#include "prd/core/error.hpp"
#include "prd/core/rng.hpp"
#include "prd/core/rollout.hpp"
#include "prd/trainer/trainer.hpp"

namespace prd::train {

EvalSummary summarize(std::vector<double> group_rewards) {
  EvalSummary s;
  s.episodes = static_cast<std::int64_t>(group_rewards.size());
  if (s.episodes > 0) {
    double sum = 0.0;
    for (double r : group_rewards) sum += r;
    s.mean_group_reward = sum / static_cast<double>(s.episodes);
  }
  if (s.episodes > 1) {
    double ss = 0.0;
    for (double r : group_rewards) ss += (r - s.mean_group_reward) * (r - s.mean_group_reward);
    s.std_group_reward = std::sqrt(ss / static_cast<double>(s.episodes - 1));
  }
  s.group_rewards = std::move(group_rewards);
  return s;
}

EvalSummary evaluate(const nets::ActorNetwork& actor, const envs::Environment& env, std::int64_t n_episodes,
                     std::uint64_t seed, bool greedy) {
  require(n_episodes >= 0, "evaluate: negative episode count");
  require(actor.config().num_agents == env.num_agents(), "evaluate: actor and environment agent counts differ");
  const MmdpConfig cfg{env.num_agents(), env.horizon(), 0.99, seed};
  std::vector<double> rewards(static_cast<std::size_t>(n_episodes));
  RolloutOptions options;
  options.greedy = greedy;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < n_episodes; ++k) {
    try {
      const Episode ep = rollout(env, actor, nullptr, cfg,
                                 episode_stream_key(seed, static_cast<std::uint64_t>(k)), options);
      rewards[static_cast<std::size_t>(k)] = ep.total_reward();
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(std::move(rewards));
}

EvalSummary evaluate(const nets::Checkpoint& ckpt, const std::optional<envs::EnvSpec>& env,
                     std::int64_t n_episodes, std::uint64_t seed, bool greedy) {
  const LoadedRun run = load_run(ckpt);
  const envs::Environment e(env ? *env : run.config.env);
  return evaluate(run.models.actor, e, n_episodes, seed, greedy);
}

EvalSummary random_policy_baseline(const envs::Environment& env, std::int64_t n_episodes, std::uint64_t seed) {
  nets::ActorNetwork uniform(nets::ActorConfig{env.num_agents(), kNumActions, {8}}, 0);
  uniform.params().values().setZero();
  return evaluate(uniform, env, n_episodes, seed, false);
}

}  // namespace prd::train
