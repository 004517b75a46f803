#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "prd/nets/parameter_set.hpp"

namespace prd::nets {

// Fully connected tanh network over a column batch: x is (in x N). Hidden
// layers use tanh; the last layer is linear unless tanh_output is set.
class Mlp {
 public:
  struct Cache {
    // layers[0] is the input; layers[l + 1] is the output of layer l.
    std::vector<Eigen::MatrixXd> layers;
  };

  Mlp() = default;
  Mlp(ParameterSet& params, const std::string& prefix, std::vector<int> sizes, bool tanh_output);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }

  Eigen::MatrixXd forward(const ParameterSet& params, const Eigen::MatrixXd& x, Cache* cache = nullptr) const;

  // Accumulates dL/dparams into grad given dL/dy. Returns dL/dx when
  // want_input_grad is set, otherwise an empty matrix.
  Eigen::MatrixXd backward(const ParameterSet& params, const Cache& cache, const Eigen::MatrixXd& dy,
                           Eigen::VectorXd& grad, bool want_input_grad = false) const;

 private:
  std::vector<int> sizes_;
  std::vector<int> weights_;
  std::vector<int> biases_;
  bool tanh_output_ = false;
};

}  // namespace prd::nets
