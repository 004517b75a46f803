#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "prd/nets/parameter_set.hpp"

namespace prd::nets {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  std::uint64_t steps = 0;

  static AdamState zeros(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0};
  }
  friend bool operator==(const AdamState& a, const AdamState& b) {
    return a.steps == b.steps && a.first_moment == b.first_moment && a.second_moment == b.second_moment;
  }
};

// One bias-corrected Adam step that descends along grad. Throws
// NumericalError (leaving params untouched) if the update is not finite.
void adam_step(ParameterSet& params, const GradientVector& grad, AdamState& state, const AdamConfig& config);

}  // namespace prd::nets
