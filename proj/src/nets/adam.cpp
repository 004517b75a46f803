#include "prd/nets/adam.hpp"

#include <cmath>

#include "prd/core/error.hpp"

namespace prd::nets {

void adam_step(ParameterSet& params, const GradientVector& grad, AdamState& state, const AdamConfig& config) {
  const Eigen::Index n = params.size();
  require(grad.size() == n, "adam_step: gradient length does not match parameters");
  if (state.first_moment.size() == 0 && state.steps == 0) state = AdamState::zeros(n);
  require(state.first_moment.size() == n && state.second_moment.size() == n,
          "adam_step: optimizer state length does not match parameters");
  if (!grad.allFinite()) throw NumericalError("adam_step: non-finite gradient");

  const std::uint64_t step = state.steps + 1;
  const Eigen::VectorXd m = config.beta1 * state.first_moment + (1.0 - config.beta1) * grad;
  const Eigen::VectorXd v = config.beta2 * state.second_moment + (1.0 - config.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
  const Eigen::VectorXd update =
      config.learning_rate * ((m / c1).array() / ((v / c2).array().sqrt() + config.epsilon)).matrix();
  if (!update.allFinite()) throw NumericalError("adam_step: non-finite update");
  params.values() -= update;
  state.first_moment = m;
  state.second_moment = v;
  state.steps = step;
}

}  // namespace prd::nets
