#include "prd/algorithms/relevance.hpp"

#include "prd/core/error.hpp"

namespace prd::algo {

BoolMatrix relevant_mask(const AttentionMatrix& attention, double epsilon) {
  require(attention.rows() == attention.cols(), "relevant_mask: attention must be square");
  return (attention.array() > epsilon).matrix();
}

RelevanceMask attention_mask(const Episode& ep, double epsilon) {
  require(static_cast<int>(ep.attention_matrices.size()) == ep.horizon,
          "attention_mask: episode has no cached attention matrices");
  const int m = ep.num_agents;
  RelevanceMask mask(ep.horizon, m);
  for (int t = 0; t < ep.horizon; ++t) {
    const auto& w = ep.attention_matrices[t];
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) mask(t, i, j) = w(i, j) > epsilon ? 1 : 0;
    }
  }
  return mask;
}

RelevanceMask all_true_mask(int steps, int agents) { return RelevanceMask(steps, agents, 1); }

RelevanceMask identity_mask(int steps, int agents) {
  RelevanceMask mask(steps, agents, 0);
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < agents; ++i) mask(t, i, i) = 1;
  }
  return mask;
}

double mean_relevant_set_size(const RelevanceMask& mask) {
  const std::size_t rows = static_cast<std::size_t>(mask.steps()) * mask.agents();
  if (rows == 0) return 0.0;
  double total = 0.0;
  for (std::uint8_t v : mask.data()) total += v;
  return total / static_cast<double>(rows);
}

}  // namespace prd::algo
