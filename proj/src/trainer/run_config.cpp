#include "prd/trainer/run_config.hpp"

#include <fstream>
#include <set>

#include "prd/core/error.hpp"

namespace prd::train {

void RunConfig::validate() const {
  env.validate();
  estimator.validate();
  epsilon.validate();
  require(!nets.actor_hidden.empty(), "config: actor_hidden must list at least one layer");
  for (int h : nets.actor_hidden) require(h > 0, "config: actor_hidden sizes must be positive");
  for (int h : nets.coma_hidden) require(h > 0, "config: coma_hidden sizes must be positive");
  require(nets.critic_preprocess_hidden > 0 && nets.critic_attention_dim > 0, "config: critic sizes must be positive");
  require(actor_lr > 0.0 && critic_lr > 0.0, "config: learning rates must be positive");
  require(total_episodes >= 1, "config: total_episodes must be >= 1");
  require(checkpoint_interval >= 1, "config: checkpoint_interval must be >= 1");
  require(metrics_flush_interval >= 1, "config: metrics_flush_interval must be >= 1");
}

MmdpConfig RunConfig::mmdp() const {
  return {env.num_agents, env.horizon, estimator.gamma, seed};
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["env"] = envs::to_json(cfg.env);
  j["algorithm"] = algo::to_string(cfg.algorithm);
  j["gamma"] = cfg.estimator.gamma;
  j["lambda_gae"] = cfg.estimator.lambda_gae;
  j["lambda_td"] = cfg.estimator.lambda_td;
  j["huber_delta"] = cfg.estimator.huber_delta;
  j["normalize_advantages"] = cfg.estimator.normalize_advantages;
  j["epsilon_max"] = cfg.epsilon.epsilon_max;
  j["epsilon_ramp_episodes"] = cfg.epsilon.ramp_episodes;
  j["actor_hidden"] = cfg.nets.actor_hidden;
  j["critic_preprocess_hidden"] = cfg.nets.critic_preprocess_hidden;
  j["critic_attention_dim"] = cfg.nets.critic_attention_dim;
  j["critic_agent_id_features"] = cfg.nets.critic_agent_id_features;
  j["critic_value_input"] = nets::to_string(cfg.nets.critic_value_input);
  j["coma_hidden"] = cfg.nets.coma_hidden;
  j["actor_lr"] = cfg.actor_lr;
  j["critic_lr"] = cfg.critic_lr;
  j["total_episodes"] = cfg.total_episodes;
  j["checkpoint_interval"] = cfg.checkpoint_interval;
  j["metrics_flush_interval"] = cfg.metrics_flush_interval;
  j["seed"] = cfg.seed;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  require(j.is_object(), "config: expected a JSON object");
  static const std::set<std::string> kKeys = {
      "env", "algorithm", "gamma", "lambda_gae", "lambda_td", "huber_delta", "normalize_advantages",
      "epsilon_max", "epsilon_ramp_episodes", "actor_hidden", "critic_preprocess_hidden",
      "critic_attention_dim", "critic_agent_id_features", "critic_value_input", "coma_hidden", "actor_lr",
      "critic_lr", "total_episodes", "checkpoint_interval", "metrics_flush_interval", "seed"};
  for (const auto& [key, _] : j.items()) {
    require(kKeys.count(key) > 0, "config: unknown key '" + key + "'");
  }
  require(j.contains("env"), "config: missing key 'env'");

  RunConfig cfg;
  try {
    cfg.seed = j.value("seed", cfg.seed);
    cfg.env = envs::env_spec_from_json(j.at("env"), cfg.seed);
    if (j.contains("algorithm")) cfg.algorithm = algo::algorithm_from_string(j.at("algorithm").get<std::string>());
    cfg.estimator.gamma = j.value("gamma", cfg.estimator.gamma);
    cfg.estimator.lambda_gae = j.value("lambda_gae", cfg.estimator.lambda_gae);
    cfg.estimator.lambda_td = j.value("lambda_td", cfg.estimator.lambda_td);
    cfg.estimator.huber_delta = j.value("huber_delta", cfg.estimator.huber_delta);
    cfg.estimator.normalize_advantages = j.value("normalize_advantages", cfg.estimator.normalize_advantages);
    cfg.epsilon.epsilon_max = j.value("epsilon_max", cfg.epsilon.epsilon_max);
    cfg.epsilon.ramp_episodes = j.value("epsilon_ramp_episodes", cfg.epsilon.ramp_episodes);
    cfg.nets.actor_hidden = j.value("actor_hidden", cfg.nets.actor_hidden);
    cfg.nets.critic_preprocess_hidden = j.value("critic_preprocess_hidden", cfg.nets.critic_preprocess_hidden);
    cfg.nets.critic_attention_dim = j.value("critic_attention_dim", cfg.nets.critic_attention_dim);
    cfg.nets.critic_agent_id_features = j.value("critic_agent_id_features", cfg.nets.critic_agent_id_features);
    if (j.contains("critic_value_input")) {
      cfg.nets.critic_value_input = nets::value_input_from_string(j.at("critic_value_input").get<std::string>());
    }
    cfg.nets.coma_hidden = j.value("coma_hidden", cfg.nets.coma_hidden);
    cfg.actor_lr = j.value("actor_lr", cfg.actor_lr);
    cfg.critic_lr = j.value("critic_lr", cfg.critic_lr);
    cfg.total_episodes = j.value("total_episodes", cfg.total_episodes);
    cfg.checkpoint_interval = j.value("checkpoint_interval", cfg.checkpoint_interval);
    cfg.metrics_flush_interval = j.value("metrics_flush_interval", cfg.metrics_flush_interval);
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ContractViolation("config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace prd::train
