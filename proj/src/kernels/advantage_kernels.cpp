#include "prd/kernels/advantage_kernels.hpp"

#include <vector>

#include "prd/core/error.hpp"

namespace prd::kernels {

namespace {

enum class Output { kAdvantage, kTarget };

void check(const Episode& ep) {
  require(ep.has_critic_outputs(), "advantage kernels: episode has no cached critic outputs");
  require(static_cast<int>(ep.value_matrices.size()) == ep.horizon + 1,
          "advantage kernels: expected horizon + 1 value matrices");
}

// Fills every (t, i, j) entry for one pair.
void fill_pair(const Episode& ep, int i, int j, Output out, AdvantageKind kind, const est::EstimatorConfig& cfg,
               est::Array3<double>& dst) {
  const int T = ep.horizon;
  std::vector<double> rewards(T);
  std::vector<double> values(T + 1);
  for (int t = 0; t < T; ++t) {
    rewards[t] = ep.reward(t, j);
    values[t] = ep.value_matrices[t](i, j);
  }
  values[T] = 0.0;  // episodic: no bootstrap beyond the horizon
  std::vector<double> seq;
  if (out == Output::kTarget) {
    seq = est::td_lambda_targets(rewards, values, cfg.gamma, cfg.lambda_td);
  } else if (kind == AdvantageKind::kGae) {
    seq = est::gae(rewards, values, cfg.gamma, cfg.lambda_gae);
  } else {
    seq = est::mc_advantage(rewards, values, cfg.gamma);
  }
  for (int t = 0; t < T; ++t) dst(t, i, j) = seq[t];
}

est::Array3<double> run(const Episode& ep, Output out, AdvantageKind kind, const est::EstimatorConfig& cfg,
                        bool use_threads) {
  check(ep);
  const int m = ep.num_agents;
  est::Array3<double> dst(ep.horizon, m);
  const int pairs = m * m;
  if (use_threads) {
#pragma omp parallel for schedule(static)
    for (int p = 0; p < pairs; ++p) fill_pair(ep, p / m, p % m, out, kind, cfg, dst);
  } else {
    for (int p = 0; p < pairs; ++p) fill_pair(ep, p / m, p % m, out, kind, cfg, dst);
  }
  return dst;
}

}  // namespace

namespace serial {
est::AdvantageTensor advantages(const Episode& ep, AdvantageKind kind, const est::EstimatorConfig& cfg) {
  return run(ep, Output::kAdvantage, kind, cfg, false);
}
est::TargetTensor td_targets(const Episode& ep, const est::EstimatorConfig& cfg) {
  return run(ep, Output::kTarget, AdvantageKind::kGae, cfg, false);
}
}  // namespace serial

namespace parallel {
est::AdvantageTensor advantages(const Episode& ep, AdvantageKind kind, const est::EstimatorConfig& cfg) {
  return run(ep, Output::kAdvantage, kind, cfg, true);
}
est::TargetTensor td_targets(const Episode& ep, const est::EstimatorConfig& cfg) {
  return run(ep, Output::kTarget, AdvantageKind::kGae, cfg, true);
}
}  // namespace parallel

}  // namespace prd::kernels
