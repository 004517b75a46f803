#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prd/core/types.hpp"
#include "prd/nets/mlp.hpp"
#include "prd/nets/parameter_set.hpp"

namespace prd::nets {

// What the attention values of agent k are computed from.
enum class ValueInput {
  kObservationAction,  // preprocessed state of k plus its action features
  kActionOnly,         // action features of k only
};

std::string to_string(ValueInput v);
ValueInput value_input_from_string(const std::string& name);

struct CriticConfig {
  int num_agents = 2;
  int num_actions = kNumActions;
  int preprocess_hidden = 64;
  int attention_dim = 64;
  // Appends a one-hot agent index to every state block so keys and queries
  // can tell agents apart.
  bool agent_id_features = true;
  ValueInput value_input = ValueInput::kObservationAction;
};

// One timestep as seen by the critic. action_features is K x M: one-hot
// taken actions, or policy probabilities where no action exists (terminal
// state). policies is M x K.
struct CriticInput {
  JointState state;
  Eigen::MatrixXd action_features;
  PolicyDistribution policies;
};

CriticInput make_critic_input(const JointState& state, const JointAction& action,
                              const PolicyDistribution& policies);
// Every agent's action replaced by its policy vector.
CriticInput make_terminal_critic_input(const JointState& state, const PolicyDistribution& policies);

struct CriticOutput {
  ValueMatrix values;        // V(i, j)
  AttentionMatrix attention; // W(k, j), columns sum to one
};

struct LossAndGrad {
  double loss = 0.0;
  GradientVector grad;
};

// Single-head scaled dot-product attention critic. Keys and queries come
// from preprocessed states only; the values of agent k come from its
// preprocessed state and action features. Row i of the value matrix is
// computed with agent i's action features replaced by its policy vector, so
// it never reads a^(i). The attention matrix is shared by every row.
class AttentionCritic {
 public:
  AttentionCritic(const CriticConfig& config, std::uint64_t seed);

  const CriticConfig& config() const { return config_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  int state_feature_dim() const;

  CriticOutput forward(const JointState& state, const JointAction& action,
                       const PolicyDistribution& policies) const;
  std::vector<CriticOutput> forward_batch(std::span<const CriticInput> batch) const;

  // Mean elementwise Huber loss over every (t, i, j) entry and its gradient.
  LossAndGrad loss_and_grad(std::span<const CriticInput> batch, std::span<const ValueMatrix> targets,
                            double delta) const;

 private:
  struct Pass;
  Pass run(std::span<const CriticInput> batch) const;

  CriticConfig config_;
  ParameterSet params_;
  Mlp preprocess_;
  int wq_ = -1, wk_ = -1, wvh_ = -1, wva_ = -1, bv_ = -1, wout_ = -1, bout_ = -1;
};

}  // namespace prd::nets
