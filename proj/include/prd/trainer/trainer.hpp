#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "prd/core/types.hpp"
#include "prd/envs/environment.hpp"
#include "prd/nets/actor.hpp"
#include "prd/nets/adam.hpp"
#include "prd/nets/attention_critic.hpp"
#include "prd/nets/checkpoint.hpp"
#include "prd/nets/coma_critic.hpp"
#include "prd/trainer/metrics.hpp"
#include "prd/trainer/run_config.hpp"

namespace prd::train {

// Networks and optimizer state of one run. Exactly one of critic / coma is
// set, depending on the algorithm.
struct Models {
  nets::ActorNetwork actor;
  std::optional<nets::AttentionCritic> critic;
  std::optional<nets::ComaCritic> coma;
  nets::AdamState actor_opt;
  nets::AdamState critic_opt;

  nets::ParameterSet& critic_params();
  const nets::ParameterSet& critic_params() const;
};

// Freshly initialized networks for a config; initialization is seeded by
// cfg.seed.
Models make_models(const RunConfig& cfg);

nets::Checkpoint make_checkpoint(const RunConfig& cfg, const Models& models, std::uint64_t episodes_completed);
// The embedded config and the networks it describes.
struct LoadedRun {
  RunConfig config;
  Models models;
  std::uint64_t episodes_completed = 0;
};
LoadedRun load_run(const nets::Checkpoint& ckpt);
LoadedRun load_run(const std::filesystem::path& ckpt_path);

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint64_t episode);

// One training episode: rollout, advantages and targets, one critic step,
// one actor step. Throws NumericalError naming the episode if any loss,
// gradient or update is non-finite.
MetricsRecord train_episode(const RunConfig& cfg, const envs::Environment& env, Models& models,
                            std::int64_t episode);

struct TrainOptions {
  std::filesystem::path out_dir = "run";
  // Continue from this checkpoint (its embedded config is used, with
  // total_episodes overridable below).
  std::optional<std::filesystem::path> resume;
  std::optional<std::int64_t> total_episodes;
  bool write_checkpoints = true;
  std::function<void(const MetricsRecord&)> on_episode;
};

struct TrainResult {
  RunConfig config;
  Models models;
  std::int64_t episodes_completed = 0;
};

// Writes metrics.csv, metrics.jsonl, config.json and ckpt_<episode>.bin
// (at episode 0, every checkpoint_interval episodes and at the end) into
// out_dir.
TrainResult train(const RunConfig& cfg, const TrainOptions& options);
TrainResult resume(const TrainOptions& options);

}  // namespace prd::train
