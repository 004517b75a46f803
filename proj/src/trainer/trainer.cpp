#include "prd/trainer/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "prd/algorithms/gradients.hpp"
#include "prd/algorithms/relevance.hpp"
#include "prd/core/error.hpp"
#include "prd/core/rng.hpp"
#include "prd/core/rollout.hpp"
#include "prd/kernels/advantage_kernels.hpp"

namespace prd::train {

namespace {

constexpr std::uint64_t kActorInitSalt = 0x6163746f72ULL;
constexpr std::uint64_t kCriticInitSalt = 0x637269746963ULL;

const char* critic_name(const RunConfig& cfg) {
  return algo::uses_coma_critic(cfg.algorithm) ? "coma_critic" : "critic";
}

// TD(lambda) regression of the counterfactual critic on its taken-action
// values. Head h regresses the global reward (single head) or agent h's.
nets::LossAndGrad coma_critic_step(const RunConfig& cfg, const Episode& ep, const nets::ComaCritic& coma,
                                   const Eigen::MatrixXd& x) {
  const int T = ep.horizon;
  const int m = ep.num_agents;
  const int n_act = coma.config().num_actions;
  const int heads = coma.config().num_heads;
  const Eigen::MatrixXd q = coma.forward(x);
  std::vector<int> taken(static_cast<std::size_t>(T) * m);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < m; ++i) taken[static_cast<std::size_t>(t) * m + i] = ep.actions[t].actions[i];
  }
  Eigen::MatrixXd targets(heads, static_cast<Eigen::Index>(T) * m);
  std::vector<double> rewards(T), values(T + 1);
  for (int h = 0; h < heads; ++h) {
    for (int t = 0; t < T; ++t) rewards[t] = heads == 1 ? ep.rewards[t].sum() : ep.reward(t, h);
    for (int i = 0; i < m; ++i) {
      for (int t = 0; t < T; ++t) {
        const Eigen::Index col = static_cast<Eigen::Index>(t) * m + i;
        values[t] = q(static_cast<Eigen::Index>(h) * n_act + taken[col], col);
      }
      values[T] = 0.0;
      const auto g = est::td_lambda_targets(rewards, values, cfg.estimator.gamma, cfg.estimator.lambda_td);
      for (int t = 0; t < T; ++t) targets(h, static_cast<Eigen::Index>(t) * m + i) = g[t];
    }
  }
  return coma.loss_and_grad(x, taken, targets, cfg.estimator.huber_delta);
}

nets::LossAndGrad attention_critic_step(const RunConfig& cfg, const Episode& ep, const nets::AttentionCritic& critic,
                                        const std::vector<PolicyDistribution>& policies) {
  const int T = ep.horizon;
  const int m = ep.num_agents;
  const est::TargetTensor targets = kernels::parallel::td_targets(ep, cfg.estimator);
  std::vector<ValueMatrix> tv(T, ValueMatrix(m, m));
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) tv[t](i, j) = targets(t, i, j);
    }
  }
  std::vector<nets::CriticInput> inputs = critic_inputs(ep, policies);
  inputs.resize(T);
  return critic.loss_and_grad(inputs, tv, cfg.estimator.huber_delta);
}

}  // namespace

nets::ParameterSet& Models::critic_params() { return critic ? critic->params() : coma->params(); }
const nets::ParameterSet& Models::critic_params() const { return critic ? critic->params() : coma->params(); }

Models make_models(const RunConfig& cfg) {
  const int m = cfg.env.num_agents;
  nets::ActorConfig ac{m, kNumActions, cfg.nets.actor_hidden};
  Models models{nets::ActorNetwork(ac, mix64(cfg.seed ^ kActorInitSalt)), std::nullopt, std::nullopt, {}, {}};
  if (algo::uses_coma_critic(cfg.algorithm)) {
    const int heads = cfg.algorithm == algo::Algorithm::kComaIndiv ? m : 1;
    models.coma.emplace(nets::ComaCriticConfig{m, kNumActions, cfg.nets.coma_hidden, heads},
                        mix64(cfg.seed ^ kCriticInitSalt));
  } else {
    nets::CriticConfig cc{m,
                          kNumActions,
                          cfg.nets.critic_preprocess_hidden,
                          cfg.nets.critic_attention_dim,
                          cfg.nets.critic_agent_id_features,
                          cfg.nets.critic_value_input};
    models.critic.emplace(cc, mix64(cfg.seed ^ kCriticInitSalt));
  }
  models.actor_opt = nets::AdamState::zeros(models.actor.params().size());
  models.critic_opt = nets::AdamState::zeros(models.critic_params().size());
  return models;
}

nets::Checkpoint make_checkpoint(const RunConfig& cfg, const Models& models, std::uint64_t episodes_completed) {
  nets::Checkpoint ckpt;
  ckpt.num_agents = cfg.env.num_agents;
  ckpt.num_actions = kNumActions;
  ckpt.episodes_completed = episodes_completed;
  ckpt.config_json = to_json(cfg).dump();
  ckpt.networks.push_back(nets::make_blob("actor", models.actor.params(), models.actor_opt));
  ckpt.networks.push_back(nets::make_blob(critic_name(cfg), models.critic_params(), models.critic_opt));
  return ckpt;
}

LoadedRun load_run(const nets::Checkpoint& ckpt) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ckpt.config_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("checkpoint config is not valid JSON: ") + e.what());
  }
  RunConfig cfg = run_config_from_json(j);
  if (cfg.env.num_agents != ckpt.num_agents || ckpt.num_actions != kNumActions) {
    throw FormatError("checkpoint header disagrees with its embedded config");
  }
  Models models = make_models(cfg);
  nets::load_blob(ckpt.network("actor"), models.actor.params(), models.actor_opt);
  nets::load_blob(ckpt.network(critic_name(cfg)), models.critic_params(), models.critic_opt);
  return {std::move(cfg), std::move(models), ckpt.episodes_completed};
}

LoadedRun load_run(const std::filesystem::path& ckpt_path) { return load_run(nets::read_checkpoint(ckpt_path)); }

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint64_t episode) {
  return dir / ("ckpt_" + std::to_string(episode) + ".bin");
}

MetricsRecord train_episode(const RunConfig& cfg, const envs::Environment& env, Models& models,
                            std::int64_t episode) {
  const auto start = std::chrono::steady_clock::now();
  MetricsRecord rec;
  rec.episode = episode;
  rec.epsilon = algo::epsilon(cfg.epsilon, episode);
  const int m = cfg.env.num_agents;
  try {
    const nets::AttentionCritic* critic = models.critic ? &*models.critic : nullptr;
    const Episode ep = rollout(env, models.actor, critic, cfg.mmdp(), episode_stream_key(cfg.seed, episode));
    const std::vector<PolicyDistribution> policies = episode_policies(models.actor, ep);

    Eigen::MatrixXd weights;
    nets::LossAndGrad critic_update;
    rec.mean_relevant_set_size = m;
    if (critic) {
      using algo::Algorithm;
      if (cfg.algorithm == Algorithm::kGlobalGae) {
        weights = algo::global_gae_weights(ep, cfg.estimator);
      } else {
        const auto kind = cfg.algorithm == Algorithm::kSharedAcMc ? kernels::AdvantageKind::kMonteCarlo
                                                                  : kernels::AdvantageKind::kGae;
        const est::AdvantageTensor adv = kernels::parallel::advantages(ep, kind, cfg.estimator);
        algo::RelevanceMask mask;
        if (cfg.algorithm == Algorithm::kPrdAc) {
          mask = algo::attention_mask(ep, rec.epsilon);
        } else if (cfg.algorithm == Algorithm::kGreedyAc) {
          mask = algo::identity_mask(ep.horizon, m);
        } else {
          mask = algo::all_true_mask(ep.horizon, m);
        }
        weights = algo::masked_weights(adv, mask);
        rec.mean_relevant_set_size = algo::mean_relevant_set_size(mask);
      }
      critic_update = attention_critic_step(cfg, ep, *critic, policies);
    } else {
      const Eigen::MatrixXd x = algo::coma_inputs(*models.coma, ep);
      weights = algo::coma_weights(ep, *models.coma, policies);
      critic_update = coma_critic_step(cfg, ep, *models.coma, x);
    }
    if (cfg.estimator.normalize_advantages) algo::standardize(weights);
    const nets::GradientVector g = algo::score_gradient(models.actor, ep, weights);

    if (!std::isfinite(critic_update.loss)) throw NumericalError("critic loss is non-finite");
    nets::adam_step(models.critic_params(), critic_update.grad, models.critic_opt, {cfg.critic_lr});
    nets::adam_step(models.actor.params(), -g, models.actor_opt, {cfg.actor_lr});

    rec.critic_loss = critic_update.loss;
    rec.grad_norm = g.norm();
    rec.agent_rewards.assign(m, 0.0);
    for (int t = 0; t < ep.horizon; ++t) {
      for (int i = 0; i < m; ++i) rec.agent_rewards[i] += ep.reward(t, i);
    }
    rec.group_reward = ep.total_reward();
  } catch (const NumericalError& e) {
    throw NumericalError("training diverged at episode " + std::to_string(episode) + ": " + e.what());
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

namespace {

TrainResult run_loop(RunConfig cfg, Models models, std::int64_t start, const TrainOptions& options) {
  if (options.total_episodes) cfg.total_episodes = *options.total_episodes;
  cfg.validate();
  std::filesystem::create_directories(options.out_dir);
  std::ofstream(options.out_dir / "config.json", std::ios::trunc) << to_json(cfg).dump(2) << '\n';
  const envs::Environment env(cfg.env);
  MetricsWriter writer(options.out_dir, cfg.metrics_flush_interval, start > 0 ? start : -1);
  auto save = [&](std::int64_t done) {
    if (options.write_checkpoints) {
      nets::write_checkpoint(checkpoint_path(options.out_dir, done), make_checkpoint(cfg, models, done));
    }
  };
  if (start == 0) save(0);
  for (std::int64_t e = start; e < cfg.total_episodes; ++e) {
    const MetricsRecord rec = train_episode(cfg, env, models, e);
    writer.append(rec);
    if (options.on_episode) options.on_episode(rec);
    const std::int64_t done = e + 1;
    if (done % cfg.checkpoint_interval == 0 || done == cfg.total_episodes) save(done);
  }
  writer.flush();
  const std::int64_t completed = std::max(start, cfg.total_episodes);
  return {std::move(cfg), std::move(models), completed};
}

}  // namespace

TrainResult train(const RunConfig& cfg, const TrainOptions& options) {
  cfg.validate();
  return run_loop(cfg, make_models(cfg), 0, options);
}

TrainResult resume(const TrainOptions& options) {
  require(options.resume.has_value(), "resume: no checkpoint given");
  LoadedRun run = load_run(*options.resume);
  return run_loop(std::move(run.config), std::move(run.models), static_cast<std::int64_t>(run.episodes_completed),
                  options);
}

}  // namespace prd::train
