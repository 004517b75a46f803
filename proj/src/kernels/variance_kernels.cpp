#include "prd/kernels/variance_kernels.hpp"

#include "prd/core/error.hpp"

namespace prd::kernels {

namespace {

// Welford update down one column; each column is independent.
double welford(const Eigen::MatrixXd& samples, Eigen::Index col) {
  double mean = 0.0;
  double m2 = 0.0;
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    const double x = samples(r, col);
    const double delta = x - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (x - mean);
  }
  return m2 / static_cast<double>(samples.rows() - 1);
}

}  // namespace

namespace serial {
Eigen::VectorXd column_variance(const Eigen::MatrixXd& samples) {
  require(samples.rows() >= 2, "column_variance: need at least 2 samples");
  Eigen::VectorXd var(samples.cols());
  for (Eigen::Index c = 0; c < samples.cols(); ++c) var[c] = welford(samples, c);
  return var;
}
}  // namespace serial

namespace parallel {
Eigen::VectorXd column_variance(const Eigen::MatrixXd& samples) {
  require(samples.rows() >= 2, "column_variance: need at least 2 samples");
  Eigen::VectorXd var(samples.cols());
  const Eigen::Index n = samples.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < n; ++c) var[c] = welford(samples, c);
  return var;
}
}  // namespace parallel

}  // namespace prd::kernels
