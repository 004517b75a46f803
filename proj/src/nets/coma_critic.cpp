#include "prd/nets/coma_critic.hpp"

#include <cmath>

#include "prd/core/error.hpp"
#include "prd/nets/huber.hpp"

namespace prd::nets {

ComaCritic::ComaCritic(const ComaCriticConfig& config, std::uint64_t seed) : config_(config) {
  require(config_.num_heads >= 1, "ComaCritic: need at least one head");
  std::vector<int> sizes{input_dim()};
  for (int h : config_.hidden) sizes.push_back(h);
  sizes.push_back(config_.num_heads * config_.num_actions);
  mlp_ = Mlp(params_, "coma", sizes, false);
  params_.init_fan_in(seed);
}

int ComaCritic::input_dim() const {
  const int m = config_.num_agents;
  return kStateBlock * m + m * config_.num_actions + m;
}

Eigen::VectorXd ComaCritic::input(const JointState& state, const JointAction& action, int agent) const {
  const int m = config_.num_agents;
  const int n_act = config_.num_actions;
  require(state.num_agents() == m && action.num_agents() == m, "ComaCritic::input: wrong agent count");
  require(agent >= 0 && agent < m, "ComaCritic::input: agent index out of range");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(input_dim());
  for (int k = 0; k < m; ++k) {
    const AgentState& a = state.agents[k];
    x.segment(kStateBlock * k, kStateBlock) << a.position.x, a.position.y, a.velocity.x, a.velocity.y,
        a.goal.x, a.goal.y;
    if (k != agent) {
      const int act = action.actions[k];
      require(act >= 0 && act < n_act, "ComaCritic::input: action out of range");
      x(kStateBlock * m + k * n_act + act) = 1.0;
    }
  }
  x(kStateBlock * m + m * n_act + agent) = 1.0;
  return x;
}

Eigen::MatrixXd ComaCritic::forward(const Eigen::MatrixXd& x, Mlp::Cache* cache) const {
  Eigen::MatrixXd q = mlp_.forward(params_, x, cache);
  if (!q.allFinite()) throw NumericalError("COMA critic produced non-finite output");
  return q;
}

LossAndGrad ComaCritic::loss_and_grad(const Eigen::MatrixXd& x, std::span<const int> taken,
                                      const Eigen::MatrixXd& targets, double delta) const {
  const Eigen::Index n = x.cols();
  const int heads = config_.num_heads;
  const int n_act = config_.num_actions;
  require(n > 0, "ComaCritic::loss_and_grad: empty batch");
  require(static_cast<Eigen::Index>(taken.size()) == n, "ComaCritic::loss_and_grad: action count mismatch");
  require(targets.rows() == heads && targets.cols() == n && targets.allFinite(),
          "ComaCritic::loss_and_grad: targets must be finite, heads x N");
  Mlp::Cache cache;
  const Eigen::MatrixXd q = forward(x, &cache);
  const double count = static_cast<double>(n) * heads;
  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(q.rows(), n);
  double loss = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    require(taken[c] >= 0 && taken[c] < n_act, "ComaCritic::loss_and_grad: action out of range");
    for (int h = 0; h < heads; ++h) {
      const int row = h * n_act + taken[c];
      const double e = q(row, c) - targets(h, c);
      loss += huber(e, delta);
      dq(row, c) = huber_derivative(e, delta) / count;
    }
  }
  GradientVector grad = params_.zeros_like();
  mlp_.backward(params_, cache, dq, grad);
  loss /= count;
  if (!std::isfinite(loss) || !grad.allFinite()) throw NumericalError("COMA critic loss is non-finite");
  return {loss, std::move(grad)};
}

}  // namespace prd::nets
