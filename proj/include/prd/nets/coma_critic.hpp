#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "prd/core/types.hpp"
#include "prd/nets/attention_critic.hpp"
#include "prd/nets/mlp.hpp"
#include "prd/nets/parameter_set.hpp"

namespace prd::nets {

struct ComaCriticConfig {
  int num_agents = 2;
  int num_actions = kNumActions;
  std::vector<int> hidden = {64, 64};
  // 1 for a global-reward critic, num_agents for one head per reward stream.
  int num_heads = 1;
};

// Counterfactual Q network. For agent i the input is the full state, the
// one-hot actions of every agent except i (i's block left at zero) and a
// one-hot of i; the output holds Q(s, (a', a^-i)) for every a' and head, at
// row head * K + a'.
class ComaCritic {
 public:
  ComaCritic(const ComaCriticConfig& config, std::uint64_t seed);

  const ComaCriticConfig& config() const { return config_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  int input_dim() const;

  Eigen::VectorXd input(const JointState& state, const JointAction& action, int agent) const;
  // (heads * K) x N.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Mlp::Cache* cache = nullptr) const;

  // Mean Huber loss of Q(s, a_taken) against targets (heads x N) for each
  // column, and its gradient.
  LossAndGrad loss_and_grad(const Eigen::MatrixXd& x, std::span<const int> taken,
                            const Eigen::MatrixXd& targets, double delta) const;

 private:
  ComaCriticConfig config_;
  ParameterSet params_;
  Mlp mlp_;
};

}  // namespace prd::nets
