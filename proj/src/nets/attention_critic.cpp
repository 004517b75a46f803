#include "prd/nets/attention_critic.hpp"

#include <cmath>

#include "prd/core/error.hpp"
#include "prd/nets/actor.hpp"
#include "prd/nets/huber.hpp"

namespace prd::nets {

std::string to_string(ValueInput v) {
  return v == ValueInput::kObservationAction ? "observation_action" : "action_only";
}

ValueInput value_input_from_string(const std::string& name) {
  if (name == "observation_action") return ValueInput::kObservationAction;
  if (name == "action_only") return ValueInput::kActionOnly;
  throw ContractViolation("unknown critic value input: " + name);
}

CriticInput make_critic_input(const JointState& state, const JointAction& action,
                              const PolicyDistribution& policies) {
  const int m = state.num_agents();
  require(action.num_agents() == m && policies.rows() == m, "make_critic_input: agent count mismatch");
  CriticInput in{state, Eigen::MatrixXd::Zero(policies.cols(), m), policies};
  for (int k = 0; k < m; ++k) {
    require(action.actions[k] >= 0 && action.actions[k] < policies.cols(),
            "make_critic_input: action out of range");
    in.action_features(action.actions[k], k) = 1.0;
  }
  return in;
}

CriticInput make_terminal_critic_input(const JointState& state, const PolicyDistribution& policies) {
  require(policies.rows() == state.num_agents(), "make_terminal_critic_input: agent count mismatch");
  return CriticInput{state, policies.transpose(), policies};
}

struct AttentionCritic::Pass {
  int n_steps = 0;
  Mlp::Cache pre_cache;
  Eigen::MatrixXd h;       // preprocessed states, (hidden x N*M)
  Eigen::MatrixXd q, k;    // (d x N*M)
  Eigen::MatrixXd act, pol;      // action / policy features, (K x N*M)
  Eigen::MatrixXd v_act, v_pol;  // tanh value embeddings, (d x N*M)
  Eigen::RowVectorXd s_act, s_pol;  // u . v for each column
  std::vector<Eigen::MatrixXd> attention;  // per step, M x M
  std::vector<Eigen::MatrixXd> mixed;      // per step, R(i, k) = s_act(k) off the diagonal, s_pol(i) on it
  std::vector<ValueMatrix> values;
};

AttentionCritic::AttentionCritic(const CriticConfig& config, std::uint64_t seed) : config_(config) {
  require(config_.num_agents >= 1, "AttentionCritic: need at least one agent");
  const int hid = config_.preprocess_hidden;
  const int d = config_.attention_dim;
  preprocess_ = Mlp(params_, "critic.pre", {state_feature_dim(), hid}, true);
  wq_ = params_.add("critic.query.w", d, hid);
  wk_ = params_.add("critic.key.w", d, hid);
  if (config_.value_input == ValueInput::kObservationAction) wvh_ = params_.add("critic.value.wh", d, hid);
  wva_ = params_.add("critic.value.wa", d, config_.num_actions);
  bv_ = params_.add("critic.value.b", d, 1);
  wout_ = params_.add("critic.out.w", 1, d);
  bout_ = params_.add("critic.out.b", 1, 1);
  params_.init_fan_in(seed);
}

int AttentionCritic::state_feature_dim() const {
  return kStateBlock + (config_.agent_id_features ? config_.num_agents : 0);
}

AttentionCritic::Pass AttentionCritic::run(std::span<const CriticInput> batch) const {
  const int m = config_.num_agents;
  const int n_act = config_.num_actions;
  const int d = config_.attention_dim;
  const Eigen::Index cols = static_cast<Eigen::Index>(batch.size()) * m;
  Pass p;
  p.n_steps = static_cast<int>(batch.size());

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(state_feature_dim(), cols);
  p.act.resize(n_act, cols);
  p.pol.resize(n_act, cols);
  for (int t = 0; t < p.n_steps; ++t) {
    const CriticInput& in = batch[t];
    require(in.state.num_agents() == m, "AttentionCritic: wrong agent count");
    require(in.action_features.rows() == n_act && in.action_features.cols() == m,
            "AttentionCritic: action features must be K x M");
    require(in.policies.rows() == m && in.policies.cols() == n_act, "AttentionCritic: policies must be M x K");
    for (int k = 0; k < m; ++k) {
      const AgentState& a = in.state.agents[k];
      const Eigen::Index c = static_cast<Eigen::Index>(t) * m + k;
      x.col(c).head(kStateBlock) << a.position.x, a.position.y, a.velocity.x, a.velocity.y, a.goal.x, a.goal.y;
      if (config_.agent_id_features) x(kStateBlock + k, c) = 1.0;
    }
    p.act.middleCols(static_cast<Eigen::Index>(t) * m, m) = in.action_features;
    p.pol.middleCols(static_cast<Eigen::Index>(t) * m, m) = in.policies.transpose();
  }

  p.h = preprocess_.forward(params_, x, &p.pre_cache);
  p.q = params_.view(wq_) * p.h;
  p.k = params_.view(wk_) * p.h;
  Eigen::MatrixXd za = params_.view(wva_) * p.act;
  Eigen::MatrixXd zp = params_.view(wva_) * p.pol;
  if (wvh_ >= 0) {
    const Eigen::MatrixXd zh = params_.view(wvh_) * p.h;
    za += zh;
    zp += zh;
  }
  za.colwise() += params_.view(bv_).col(0);
  zp.colwise() += params_.view(bv_).col(0);
  p.v_act = za.array().tanh();
  p.v_pol = zp.array().tanh();

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const auto u = params_.view(wout_);
  const double c0 = params_.view(bout_)(0, 0);
  // The readout is linear, so V(i, j) = sum_k (u . v_k) W(k, j) + c with v_i
  // the policy-based embedding in row i. Row i never touches s_act(i).
  p.s_act = u * p.v_act;
  p.s_pol = u * p.v_pol;
  p.attention.resize(p.n_steps);
  p.values.resize(p.n_steps);
  p.mixed.resize(p.n_steps);
  for (int t = 0; t < p.n_steps; ++t) {
    const Eigen::Index off = static_cast<Eigen::Index>(t) * m;
    // scores(k, j) = key_k . query_j / sqrt(d), softmax over k.
    const Eigen::MatrixXd scores = scale * (p.k.middleCols(off, m).transpose() * p.q.middleCols(off, m));
    Eigen::MatrixXd w = softmax_columns(scores);
    Eigen::MatrixXd r = p.s_act.segment(off, m).replicate(m, 1);
    for (int i = 0; i < m; ++i) r(i, i) = p.s_pol(off + i);
    ValueMatrix v = (r * w).array() + c0;
    if (!v.allFinite() || !w.allFinite()) {
      throw NumericalError("attention critic produced non-finite output at timestep " + std::to_string(t));
    }
    p.attention[t] = std::move(w);
    p.values[t] = std::move(v);
    p.mixed[t] = std::move(r);
  }
  return p;
}

CriticOutput AttentionCritic::forward(const JointState& state, const JointAction& action,
                                      const PolicyDistribution& policies) const {
  const CriticInput in = make_critic_input(state, action, policies);
  auto out = forward_batch(std::span<const CriticInput>(&in, 1));
  return std::move(out.front());
}

std::vector<CriticOutput> AttentionCritic::forward_batch(std::span<const CriticInput> batch) const {
  Pass p = run(batch);
  std::vector<CriticOutput> out(p.n_steps);
  for (int t = 0; t < p.n_steps; ++t) out[t] = {std::move(p.values[t]), std::move(p.attention[t])};
  return out;
}

LossAndGrad AttentionCritic::loss_and_grad(std::span<const CriticInput> batch,
                                           std::span<const ValueMatrix> targets, double delta) const {
  require(batch.size() == targets.size(), "AttentionCritic::loss_and_grad: batch/target size mismatch");
  require(!batch.empty(), "AttentionCritic::loss_and_grad: empty batch");
  const int m = config_.num_agents;
  const int d = config_.attention_dim;
  const Pass p = run(batch);
  const double count = static_cast<double>(batch.size()) * m * m;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  GradientVector grad = params_.zeros_like();
  auto g_c = params_.view(bout_, grad);
  const auto u = params_.view(wout_);

  const Eigen::Index cols = p.h.cols();
  Eigen::MatrixXd d_q = Eigen::MatrixXd::Zero(d, cols);
  Eigen::MatrixXd d_k = Eigen::MatrixXd::Zero(d, cols);
  Eigen::RowVectorXd d_sact = Eigen::RowVectorXd::Zero(cols);
  Eigen::RowVectorXd d_spol = Eigen::RowVectorXd::Zero(cols);

  double loss = 0.0;
  for (int t = 0; t < p.n_steps; ++t) {
    const ValueMatrix& target = targets[t];
    require(target.rows() == m && target.cols() == m && target.allFinite(),
            "AttentionCritic::loss_and_grad: malformed target");
    const Eigen::Index off = static_cast<Eigen::Index>(t) * m;
    const Eigen::MatrixXd& w = p.attention[t];
    Eigen::MatrixXd g(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double e = p.values[t](i, j) - target(i, j);
        loss += huber(e, delta);
        g(i, j) = huber_derivative(e, delta) / count;
      }
    }
    g_c(0, 0) += g.sum();
    const Eigen::MatrixXd d_w = p.mixed[t].transpose() * g;
    const Eigen::MatrixXd d_r = g * w.transpose();
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) {
        if (k == i) {
          d_spol(off + i) += d_r(i, k);
        } else {
          d_sact(off + k) += d_r(i, k);
        }
      }
    }
    // Column softmax backward.
    Eigen::MatrixXd d_s(m, m);
    for (int j = 0; j < m; ++j) {
      const double dot = w.col(j).dot(d_w.col(j));
      d_s.col(j) = w.col(j).array() * (d_w.col(j).array() - dot);
    }
    d_s *= scale;
    d_q.middleCols(off, m).noalias() += p.k.middleCols(off, m) * d_s;
    d_k.middleCols(off, m).noalias() += p.q.middleCols(off, m) * d_s.transpose();
  }
  loss /= count;

  params_.view(wout_, grad).noalias() += d_sact * p.v_act.transpose() + d_spol * p.v_pol.transpose();
  const Eigen::MatrixXd d_vact = u.transpose() * d_sact;
  const Eigen::MatrixXd d_vpol = u.transpose() * d_spol;
  const Eigen::MatrixXd d_za = (d_vact.array() * (1.0 - p.v_act.array().square())).matrix();
  const Eigen::MatrixXd d_zp = (d_vpol.array() * (1.0 - p.v_pol.array().square())).matrix();
  params_.view(wva_, grad).noalias() += d_za * p.act.transpose() + d_zp * p.pol.transpose();
  params_.view(bv_, grad).col(0) += d_za.rowwise().sum() + d_zp.rowwise().sum();
  params_.view(wq_, grad).noalias() += d_q * p.h.transpose();
  params_.view(wk_, grad).noalias() += d_k * p.h.transpose();
  Eigen::MatrixXd d_h = params_.view(wq_).transpose() * d_q + params_.view(wk_).transpose() * d_k;
  if (wvh_ >= 0) {
    const Eigen::MatrixXd d_z = d_za + d_zp;
    params_.view(wvh_, grad).noalias() += d_z * p.h.transpose();
    d_h.noalias() += params_.view(wvh_).transpose() * d_z;
  }
  preprocess_.backward(params_, p.pre_cache, d_h, grad);

  if (!std::isfinite(loss) || !grad.allFinite()) throw NumericalError("critic loss or gradient is non-finite");
  return {loss, std::move(grad)};
}

}  // namespace prd::nets
