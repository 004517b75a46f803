#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prd/envs/environment.hpp"
#include "prd/trainer/trainer.hpp"

namespace prd::analysis {

struct VarianceSummary {
  double median = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

VarianceSummary summarize_variance(const Eigen::VectorXd& variances);

// Per-coordinate ratio a / b with 0 / 0 taken as 1 (and x / 0 as +inf).
Eigen::VectorXd variance_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double median(Eigen::VectorXd v);

struct VarianceOptions {
  int n_samples = 100;
  std::uint64_t seed = 0x5eed;
  // Threshold of the PRD mask; defaults to the checkpoint's epsilon_max.
  std::optional<double> epsilon;
  // Use the identity mask instead of thresholded attention.
  bool oracle_identity_mask = false;
  bool greedy_actions = false;
};

// Gradient samples, one row per episode, for both estimators computed from
// the same episodes and the same frozen networks.
struct GradientSamples {
  Eigen::MatrixXd prd;
  Eigen::MatrixXd shared;
};

namespace serial {
GradientSamples sample_gradients(const train::RunConfig& cfg, const train::Models& models,
                                 const envs::Environment& env, const VarianceOptions& options);
}  // namespace serial
namespace parallel {
GradientSamples sample_gradients(const train::RunConfig& cfg, const train::Models& models,
                                 const envs::Environment& env, const VarianceOptions& options);
}  // namespace parallel

struct VarianceEntry {
  std::int64_t episode = 0;
  VarianceSummary prd;
  VarianceSummary shared;
  // Median over coordinates of var_prd / var_shared.
  double ratio_median = 0.0;
  Eigen::VectorXd prd_variance;
  Eigen::VectorXd shared_variance;
};

struct VarianceReport {
  std::vector<VarianceEntry> entries;
};

// Needs a checkpoint trained with an attention critic.
VarianceEntry gradient_variance(const train::LoadedRun& run, const envs::Environment& env,
                                const VarianceOptions& options);

// Every ckpt_<episode>.bin in dir, in episode order. The environment
// defaults to the one embedded in each checkpoint.
VarianceReport gradient_variance_dir(const std::filesystem::path& dir, const std::optional<envs::EnvSpec>& env,
                                     const VarianceOptions& options, bool skip_initial = false);

// Two rows per checkpoint (prd_ac, shared_ac_gae); ratio_median is relative
// to shared_ac_gae, so its row holds 1.
void write_variance_csv(const VarianceReport& report, const std::filesystem::path& path);
std::string variance_csv(const VarianceReport& report);

}  // namespace prd::analysis
