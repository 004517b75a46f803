#pragma once

namespace prd::nets {

// 0.5 e^2 for |e| <= delta, delta (|e| - delta / 2) beyond.
double huber(double error, double delta);
double huber_derivative(double error, double delta);

}  // namespace prd::nets
