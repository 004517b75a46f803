#include "prd/nets/huber.hpp"

#include <cmath>

namespace prd::nets {

double huber(double error, double delta) {
  const double a = std::abs(error);
  if (a <= delta) return 0.5 * error * error;
  return delta * (a - 0.5 * delta);
}

double huber_derivative(double error, double delta) {
  if (error > delta) return delta;
  if (error < -delta) return -delta;
  return error;
}

}  // namespace prd::nets
