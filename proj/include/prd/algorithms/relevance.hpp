#pragma once

#include <Eigen/Core>

#include "prd/core/types.hpp"
#include "prd/estimators/tensor.hpp"

namespace prd::algo {

// mask(t, i, j) != 0 iff agent j is in agent i's estimated relevant set.
using RelevanceMask = est::Array3<std::uint8_t>;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// mask(i, j) = W(i, j) > epsilon, strictly. W(i, j) is how much agent j
// attends to agent i, so row i lists the agents whose value estimates look at
// agent i.
BoolMatrix relevant_mask(const AttentionMatrix& attention, double epsilon);

// Thresholded attention at every step of an episode.
RelevanceMask attention_mask(const Episode& ep, double epsilon);
RelevanceMask all_true_mask(int steps, int agents);
// Each agent keeps only its own reward stream.
RelevanceMask identity_mask(int steps, int agents);

// Mean over (t, i) of the relevant-set size.
double mean_relevant_set_size(const RelevanceMask& mask);

}  // namespace prd::algo
