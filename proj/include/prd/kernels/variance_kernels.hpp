#pragma once

#include <Eigen/Core>

namespace prd::kernels {

// Per-coordinate unbiased sample variance of the rows of samples (one row
// per sample, one column per coordinate). Needs at least two rows.
namespace serial {
Eigen::VectorXd column_variance(const Eigen::MatrixXd& samples);
}  // namespace serial

namespace parallel {
Eigen::VectorXd column_variance(const Eigen::MatrixXd& samples);
}  // namespace parallel

}  // namespace prd::kernels
