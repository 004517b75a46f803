#include "prd/algorithms/gradients.hpp"

#include <cmath>
#include <span>

#include "prd/core/error.hpp"

namespace prd::algo {

Eigen::MatrixXd masked_weights(const est::AdvantageTensor& adv, const RelevanceMask& mask) {
  require(adv.same_shape(mask.steps(), mask.agents()), "masked_weights: advantage and mask shapes differ");
  const int T = adv.steps();
  const int m = adv.agents();
  Eigen::MatrixXd c(T, m);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) {
        if (mask(t, i, j)) s += adv(t, i, j);
      }
      c(t, i) = s;
    }
  }
  return c;
}

GradientVector score_gradient(const nets::ActorNetwork& actor, const Episode& ep, const Eigen::MatrixXd& weights) {
  const int T = ep.horizon;
  const int m = ep.num_agents;
  require(weights.rows() == T && weights.cols() == m, "score_gradient: weights must be T x M");
  require(static_cast<int>(ep.actions.size()) == T && static_cast<int>(ep.states.size()) >= T,
          "score_gradient: episode is truncated");
  Eigen::MatrixXd x(actor.input_dim(), static_cast<Eigen::Index>(T) * m);
  std::vector<int> actions(static_cast<std::size_t>(T) * m);
  std::vector<double> coef(static_cast<std::size_t>(T) * m);
  for (int t = 0; t < T; ++t) {
    const Eigen::MatrixXd xt = actor.inputs(ep.states[t]);
    for (int i = 0; i < m; ++i) {
      const std::size_t c = static_cast<std::size_t>(t) * m + i;
      x.col(static_cast<Eigen::Index>(c)) = xt.col(i);
      actions[c] = ep.actions[t].actions[i];
      coef[c] = weights(t, i);
    }
  }
  GradientVector g = actor.weighted_score(x, actions, coef);
  if (!g.allFinite()) throw NumericalError("actor gradient is non-finite");
  return g;
}

void standardize(Eigen::MatrixXd& weights) {
  const double n = static_cast<double>(weights.size());
  if (n < 2) return;
  const double mean = weights.mean();
  const double var = (weights.array() - mean).square().sum() / n;
  weights = (weights.array() - mean) / (std::sqrt(var) + 1e-8);
}

GradientVector actor_gradient(Algorithm variant, const Episode& ep, const nets::ActorNetwork& actor,
                              const est::AdvantageTensor& adv, const RelevanceMask& mask) {
  require(variant == Algorithm::kPrdAc || variant == Algorithm::kSharedAcGae || variant == Algorithm::kSharedAcMc ||
              variant == Algorithm::kGreedyAc,
          "actor_gradient: " + to_string(variant) + " does not use the masked advantage form");
  require(adv.same_shape(ep.horizon, ep.num_agents), "actor_gradient: advantage tensor shape mismatch");
  return score_gradient(actor, ep, masked_weights(adv, mask));
}

Eigen::MatrixXd coma_inputs(const nets::ComaCritic& critic, const Episode& ep) {
  const int T = ep.horizon;
  const int m = ep.num_agents;
  Eigen::MatrixXd x(critic.input_dim(), static_cast<Eigen::Index>(T) * m);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < m; ++i) x.col(static_cast<Eigen::Index>(t) * m + i) = critic.input(ep.states[t], ep.actions[t], i);
  }
  return x;
}

Eigen::MatrixXd coma_weights(const Episode& ep, const nets::ComaCritic& critic,
                             const std::vector<PolicyDistribution>& policies) {
  const int T = ep.horizon;
  const int m = ep.num_agents;
  const int n_act = critic.config().num_actions;
  const int heads = critic.config().num_heads;
  require(static_cast<int>(policies.size()) >= T, "coma_weights: need a policy for every step");
  const Eigen::MatrixXd q = critic.forward(coma_inputs(critic, ep));
  Eigen::MatrixXd c(T, m);
  for (int t = 0; t < T; ++t) {
    require(policies[t].rows() == m && policies[t].cols() == n_act, "coma_weights: policy shape mismatch");
    for (int i = 0; i < m; ++i) {
      const Eigen::Index col = static_cast<Eigen::Index>(t) * m + i;
      const Eigen::VectorXd pi = policies[t].row(i).transpose();
      double s = 0.0;
      for (int h = 0; h < heads; ++h) {
        const Eigen::VectorXd q_row = q.block(static_cast<Eigen::Index>(h) * n_act, col, n_act, 1);
        s += est::coma_advantage(std::span<const double>(q_row.data(), n_act),
                                 std::span<const double>(pi.data(), n_act), ep.actions[t].actions[i]);
      }
      c(t, i) = s;
    }
  }
  return c;
}

GradientVector coma_gradient(const Episode& ep, const nets::ActorNetwork& actor, const nets::ComaCritic& critic,
                             const std::vector<PolicyDistribution>& policies) {
  require(critic.config().num_heads == 1, "coma_gradient: critic must have a single global head");
  return score_gradient(actor, ep, coma_weights(ep, critic, policies));
}

GradientVector coma_indiv_gradient(const Episode& ep, const nets::ActorNetwork& actor,
                                   const nets::ComaCritic& critic, const std::vector<PolicyDistribution>& policies) {
  require(critic.config().num_heads == ep.num_agents, "coma_indiv_gradient: critic needs one head per agent");
  return score_gradient(actor, ep, coma_weights(ep, critic, policies));
}

Eigen::MatrixXd global_gae_weights(const Episode& ep, const est::EstimatorConfig& cfg) {
  require(ep.has_critic_outputs(), "global_gae_weights: episode has no cached value matrices");
  const int T = ep.horizon;
  const int m = ep.num_agents;
  std::vector<double> global(T);
  for (int t = 0; t < T; ++t) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += ep.reward(t, j);
    global[t] = s;
  }
  Eigen::MatrixXd c(T, m);
  std::vector<double> baseline(T + 1);
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < T; ++t) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += ep.value_matrices[t](i, j);
      baseline[t] = s;
    }
    baseline[T] = 0.0;
    const std::vector<double> a = est::gae(global, baseline, cfg.gamma, cfg.lambda_gae);
    for (int t = 0; t < T; ++t) c(t, i) = a[t];
  }
  return c;
}

GradientVector global_gae_gradient(const Episode& ep, const nets::ActorNetwork& actor,
                                   const est::EstimatorConfig& cfg) {
  return score_gradient(actor, ep, global_gae_weights(ep, cfg));
}

}  // namespace prd::algo
