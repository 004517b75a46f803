#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "prd/core/types.hpp"
#include "prd/nets/mlp.hpp"
#include "prd/nets/parameter_set.hpp"

namespace prd::nets {

struct ActorConfig {
  int num_agents = 2;
  int num_actions = kNumActions;
  std::vector<int> hidden = {64, 64};
};

// Shared policy MLP. Agent i sees its own state block first, then every
// other agent's block in ascending index order.
class ActorNetwork {
 public:
  ActorNetwork(const ActorConfig& config, std::uint64_t seed);

  const ActorConfig& config() const { return config_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  int input_dim() const { return kStateBlock * config_.num_agents; }

  Eigen::VectorXd input(const JointState& state, int agent) const;
  // Column i is agent i's input.
  Eigen::MatrixXd inputs(const JointState& state) const;

  // logits (K x N) for a column batch of inputs.
  Eigen::MatrixXd logits(const Eigen::MatrixXd& x, Mlp::Cache* cache = nullptr) const;

  // Row i is agent i's action distribution. Throws NumericalError on
  // non-finite logits.
  PolicyDistribution forward(const JointState& state) const;

  // sum_n coef[n] * grad log pi(actions[n] | x.col(n)) over a column batch.
  GradientVector weighted_score(const Eigen::MatrixXd& x, std::span<const int> actions,
                                std::span<const double> coef) const;

  GradientVector grad_logprob(const JointState& state, int agent, int action) const;
  double log_prob(const JointState& state, int agent, int action) const;

 private:
  ActorConfig config_;
  ParameterSet params_;
  Mlp mlp_;
};

// Column-wise softmax of a (K x N) logit matrix.
Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits);
Eigen::MatrixXd log_softmax_columns(const Eigen::MatrixXd& logits);

}  // namespace prd::nets
