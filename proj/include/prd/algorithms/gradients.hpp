#pragma once

#include <Eigen/Core>
#include <vector>

#include "prd/algorithms/relevance.hpp"
#include "prd/algorithms/variant.hpp"
#include "prd/core/types.hpp"
#include "prd/estimators/estimators.hpp"
#include "prd/estimators/tensor.hpp"
#include "prd/nets/actor.hpp"
#include "prd/nets/coma_critic.hpp"

namespace prd::algo {

using nets::GradientVector;

// Score-function weights, one per (t, i): c(t, i) = sum_{j : mask} A(t, i, j).
// Masked-out terms are skipped, so an all-true mask reproduces the unmasked
// sum bit for bit.
Eigen::MatrixXd masked_weights(const est::AdvantageTensor& adv, const RelevanceMask& mask);

// sum_{t, i} c(t, i) grad log pi(a_t^(i) | s_t) for the shared actor. This is
// an ascent direction; negate it before handing it to a minimizer.
GradientVector score_gradient(const nets::ActorNetwork& actor, const Episode& ep, const Eigen::MatrixXd& weights);

// In-place standardization of the weights to zero mean, unit variance.
void standardize(Eigen::MatrixXd& weights);

// prd_ac, shared_ac_gae, shared_ac_mc and greedy_ac share this form and
// differ only in the advantage tensor and the mask supplied by the caller.
GradientVector actor_gradient(Algorithm variant, const Episode& ep, const nets::ActorNetwork& actor,
                              const est::AdvantageTensor& adv, const RelevanceMask& mask);

// Columns t-major then agent: column t * M + i is agent i's input at step t.
Eigen::MatrixXd coma_inputs(const nets::ComaCritic& critic, const Episode& ep);

// c(t, i) = sum_h [Q_h(s, a) - E_{a' ~ pi_i} Q_h(s, (a', a^-i))] over the
// critic's heads (one head for COMA, one per reward stream for COMA-indiv).
Eigen::MatrixXd coma_weights(const Episode& ep, const nets::ComaCritic& critic,
                             const std::vector<PolicyDistribution>& policies);

GradientVector coma_gradient(const Episode& ep, const nets::ActorNetwork& actor, const nets::ComaCritic& critic,
                             const std::vector<PolicyDistribution>& policies);
GradientVector coma_indiv_gradient(const Episode& ep, const nets::ActorNetwork& actor,
                                   const nets::ComaCritic& critic, const std::vector<PolicyDistribution>& policies);

// c(t, i) = gae(sum_j r^(j), sum_j V(i, j))_t.
Eigen::MatrixXd global_gae_weights(const Episode& ep, const est::EstimatorConfig& cfg);
GradientVector global_gae_gradient(const Episode& ep, const nets::ActorNetwork& actor,
                                   const est::EstimatorConfig& cfg);

}  // namespace prd::algo
