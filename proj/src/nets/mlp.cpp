#include "prd/nets/mlp.hpp"

#include "prd/core/error.hpp"

namespace prd::nets {

Mlp::Mlp(ParameterSet& params, const std::string& prefix, std::vector<int> sizes, bool tanh_output)
    : sizes_(std::move(sizes)), tanh_output_(tanh_output) {
  require(sizes_.size() >= 2, "Mlp: need at least input and output sizes");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::string tag = prefix + ".l" + std::to_string(l);
    weights_.push_back(params.add(tag + ".w", sizes_[l + 1], sizes_[l]));
    biases_.push_back(params.add(tag + ".b", sizes_[l + 1], 1));
  }
}

Eigen::MatrixXd Mlp::forward(const ParameterSet& params, const Eigen::MatrixXd& x, Cache* cache) const {
  require(x.rows() == input_dim(), "Mlp::forward: input dimension mismatch");
  const std::size_t n_layers = weights_.size();
  if (cache) {
    cache->layers.resize(n_layers + 1);
    cache->layers[0] = x;
  }
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd z = params.view(weights_[l]) * h;
    z.colwise() += params.view(biases_[l]).col(0);
    const bool activate = l + 1 < n_layers || tanh_output_;
    h = activate ? Eigen::MatrixXd(z.array().tanh()) : z;
    if (cache) cache->layers[l + 1] = h;
  }
  return h;
}

Eigen::MatrixXd Mlp::backward(const ParameterSet& params, const Cache& cache, const Eigen::MatrixXd& dy,
                              Eigen::VectorXd& grad, bool want_input_grad) const {
  const std::size_t n_layers = weights_.size();
  require(cache.layers.size() == n_layers + 1, "Mlp::backward: cache does not match network");
  Eigen::MatrixXd delta = dy;
  for (std::size_t l = n_layers; l-- > 0;) {
    const bool activated = l + 1 < n_layers || tanh_output_;
    if (activated) delta = (delta.array() * (1.0 - cache.layers[l + 1].array().square())).matrix();
    params.view(weights_[l], grad).noalias() += delta * cache.layers[l].transpose();
    params.view(biases_[l], grad).col(0) += delta.rowwise().sum();
    if (l > 0 || want_input_grad) delta = params.view(weights_[l]).transpose() * delta;
  }
  if (!want_input_grad) return {};
  return delta;
}

}  // namespace prd::nets
