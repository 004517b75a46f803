#include "prd/nets/actor.hpp"

#include <cmath>

#include "prd/core/error.hpp"

namespace prd::nets {

Eigen::MatrixXd log_softmax_columns(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index n = 0; n < logits.cols(); ++n) {
    const double mx = logits.col(n).maxCoeff();
    const double lse = mx + std::log((logits.col(n).array() - mx).exp().sum());
    out.col(n) = logits.col(n).array() - lse;
  }
  return out;
}

Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index n = 0; n < logits.cols(); ++n) {
    const double mx = logits.col(n).maxCoeff();
    out.col(n) = (logits.col(n).array() - mx).exp();
    out.col(n) /= out.col(n).sum();
  }
  return out;
}

ActorNetwork::ActorNetwork(const ActorConfig& config, std::uint64_t seed) : config_(config) {
  require(config_.num_agents >= 1, "ActorNetwork: need at least one agent");
  require(config_.num_actions >= 1, "ActorNetwork: need at least one action");
  std::vector<int> sizes;
  sizes.push_back(input_dim());
  for (int h : config_.hidden) sizes.push_back(h);
  sizes.push_back(config_.num_actions);
  mlp_ = Mlp(params_, "actor", sizes, false);
  params_.init_fan_in(seed);
}

Eigen::VectorXd ActorNetwork::input(const JointState& state, int agent) const {
  const int m = config_.num_agents;
  require(state.num_agents() == m, "ActorNetwork::input: wrong agent count");
  require(agent >= 0 && agent < m, "ActorNetwork::input: agent index out of range");
  Eigen::VectorXd x(input_dim());
  int slot = 0;
  auto put = [&](const AgentState& a) {
    x.segment(kStateBlock * slot, kStateBlock) << a.position.x, a.position.y, a.velocity.x,
        a.velocity.y, a.goal.x, a.goal.y;
    ++slot;
  };
  put(state.agents[agent]);
  for (int k = 0; k < m; ++k) {
    if (k != agent) put(state.agents[k]);
  }
  return x;
}

Eigen::MatrixXd ActorNetwork::inputs(const JointState& state) const {
  Eigen::MatrixXd x(input_dim(), config_.num_agents);
  for (int i = 0; i < config_.num_agents; ++i) x.col(i) = input(state, i);
  return x;
}

Eigen::MatrixXd ActorNetwork::logits(const Eigen::MatrixXd& x, Mlp::Cache* cache) const {
  return mlp_.forward(params_, x, cache);
}

PolicyDistribution ActorNetwork::forward(const JointState& state) const {
  const Eigen::MatrixXd z = logits(inputs(state));
  if (!z.allFinite()) throw NumericalError("actor produced non-finite logits");
  return softmax_columns(z).transpose();
}

GradientVector ActorNetwork::weighted_score(const Eigen::MatrixXd& x, std::span<const int> actions,
                                            std::span<const double> coef) const {
  const Eigen::Index n = x.cols();
  require(static_cast<Eigen::Index>(actions.size()) == n && static_cast<Eigen::Index>(coef.size()) == n,
          "ActorNetwork::weighted_score: batch size mismatch");
  Mlp::Cache cache;
  const Eigen::MatrixXd z = logits(x, &cache);
  // d log pi(a) / d logits = onehot(a) - pi.
  Eigen::MatrixXd dz = -softmax_columns(z);
  for (Eigen::Index c = 0; c < n; ++c) {
    require(actions[c] >= 0 && actions[c] < config_.num_actions, "weighted_score: action out of range");
    dz(actions[c], c) += 1.0;
    dz.col(c) *= coef[c];
  }
  GradientVector grad = params_.zeros_like();
  mlp_.backward(params_, cache, dz, grad);
  return grad;
}

GradientVector ActorNetwork::grad_logprob(const JointState& state, int agent, int action) const {
  const Eigen::MatrixXd x = input(state, agent);
  const int a[1] = {action};
  const double c[1] = {1.0};
  return weighted_score(x, a, c);
}

double ActorNetwork::log_prob(const JointState& state, int agent, int action) const {
  require(action >= 0 && action < config_.num_actions, "log_prob: action out of range");
  return log_softmax_columns(logits(input(state, agent)))(action, 0);
}

}  // namespace prd::nets
