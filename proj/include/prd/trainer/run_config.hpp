#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "prd/algorithms/variant.hpp"
#include "prd/core/types.hpp"
#include "prd/envs/env_spec.hpp"
#include "prd/estimators/estimators.hpp"
#include "prd/nets/attention_critic.hpp"

namespace prd::train {

struct NetworkSizes {
  std::vector<int> actor_hidden = {64, 64};
  int critic_preprocess_hidden = 64;
  int critic_attention_dim = 64;
  bool critic_agent_id_features = true;
  nets::ValueInput critic_value_input = nets::ValueInput::kObservationAction;
  std::vector<int> coma_hidden = {64, 64};
};

struct RunConfig {
  envs::EnvSpec env;
  algo::Algorithm algorithm = algo::Algorithm::kPrdAc;
  est::EstimatorConfig estimator;
  algo::EpsilonSchedule epsilon;
  NetworkSizes nets;
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  std::int64_t total_episodes = 20000;
  std::int64_t checkpoint_interval = 1000;
  std::int64_t metrics_flush_interval = 100;
  std::uint64_t seed = 0;

  void validate() const;
  MmdpConfig mmdp() const;
};

nlohmann::json to_json(const RunConfig& cfg);
// Every key is optional except env.family; unknown keys throw
// ContractViolation.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace prd::train
