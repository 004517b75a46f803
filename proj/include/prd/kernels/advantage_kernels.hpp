#pragma once

#include "prd/core/types.hpp"
#include "prd/estimators/estimators.hpp"
#include "prd/estimators/tensor.hpp"

namespace prd::kernels {

enum class AdvantageKind { kGae, kMonteCarlo };

// Per-(i, j) sequence estimators over an episode's cached value matrices:
// rewards are agent j's, values are V(i, j) at t = 0..T-1 with a zero
// bootstrap at T. Pairs are independent; the OpenMP versions therefore give
// bitwise the same tensors as the serial references.
namespace serial {
est::AdvantageTensor advantages(const Episode& ep, AdvantageKind kind, const est::EstimatorConfig& cfg);
est::TargetTensor td_targets(const Episode& ep, const est::EstimatorConfig& cfg);
}  // namespace serial

namespace parallel {
est::AdvantageTensor advantages(const Episode& ep, AdvantageKind kind, const est::EstimatorConfig& cfg);
est::TargetTensor td_targets(const Episode& ep, const est::EstimatorConfig& cfg);
}  // namespace parallel

}  // namespace prd::kernels
