#include "prd/analysis/gradient_variance.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <regex>

#include "prd/algorithms/gradients.hpp"
#include "prd/algorithms/relevance.hpp"
#include "prd/core/error.hpp"
#include "prd/core/rng.hpp"
#include "prd/core/rollout.hpp"
#include "prd/kernels/advantage_kernels.hpp"
#include "prd/kernels/variance_kernels.hpp"

namespace prd::analysis {

double median(Eigen::VectorXd v) {
  require(v.size() > 0, "median: empty vector");
  std::sort(v.data(), v.data() + v.size());
  const Eigen::Index n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

VarianceSummary summarize_variance(const Eigen::VectorXd& variances) {
  require(variances.size() > 0, "summarize_variance: no coordinates");
  return {median(variances), variances.mean(), variances.maxCoeff()};
}

Eigen::VectorXd variance_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  require(a.size() == b.size(), "variance_ratio: size mismatch");
  Eigen::VectorXd r(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (b[k] == 0.0) {
      r[k] = a[k] == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      r[k] = a[k] / b[k];
    }
  }
  return r;
}

namespace {

void sample_one(const train::RunConfig& cfg, const train::Models& models, const envs::Environment& env,
                const VarianceOptions& options, double eps, int k, GradientSamples& out) {
  RolloutOptions ro;
  ro.greedy = options.greedy_actions;
  MmdpConfig mcfg = cfg.mmdp();
  mcfg.horizon = env.horizon();
  const Episode ep = rollout(env, models.actor, &*models.critic, mcfg,
                             episode_stream_key(options.seed, static_cast<std::uint64_t>(k)), ro);
  const est::AdvantageTensor adv = kernels::serial::advantages(ep, kernels::AdvantageKind::kGae, cfg.estimator);
  const algo::RelevanceMask prd_mask = options.oracle_identity_mask ? algo::identity_mask(ep.horizon, ep.num_agents)
                                                                    : algo::attention_mask(ep, eps);
  const algo::RelevanceMask all = algo::all_true_mask(ep.horizon, ep.num_agents);
  out.prd.row(k) = algo::actor_gradient(algo::Algorithm::kPrdAc, ep, models.actor, adv, prd_mask).transpose();
  out.shared.row(k) = algo::actor_gradient(algo::Algorithm::kSharedAcGae, ep, models.actor, adv, all).transpose();
}

GradientSamples sample(const train::RunConfig& cfg, const train::Models& models, const envs::Environment& env,
                       const VarianceOptions& options, bool use_threads) {
  require(options.n_samples >= 2, "gradient_variance: need at least 2 samples");
  require(models.critic.has_value(), "gradient_variance: checkpoint has no attention critic");
  require(env.num_agents() == cfg.env.num_agents, "gradient_variance: environment agent count differs");
  const double eps = options.epsilon.value_or(cfg.epsilon.epsilon_max);
  const Eigen::Index dim = models.actor.params().size();
  GradientSamples out{Eigen::MatrixXd(options.n_samples, dim), Eigen::MatrixXd(options.n_samples, dim)};
  if (!use_threads) {
    for (int k = 0; k < options.n_samples; ++k) sample_one(cfg, models, env, options, eps, k, out);
    return out;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < options.n_samples; ++k) {
    try {
      sample_one(cfg, models, env, options, eps, k, out);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

namespace serial {
GradientSamples sample_gradients(const train::RunConfig& cfg, const train::Models& models,
                                 const envs::Environment& env, const VarianceOptions& options) {
  return sample(cfg, models, env, options, false);
}
}  // namespace serial

namespace parallel {
GradientSamples sample_gradients(const train::RunConfig& cfg, const train::Models& models,
                                 const envs::Environment& env, const VarianceOptions& options) {
  return sample(cfg, models, env, options, true);
}
}  // namespace parallel

VarianceEntry gradient_variance(const train::LoadedRun& run, const envs::Environment& env,
                                const VarianceOptions& options) {
  const GradientSamples s = parallel::sample_gradients(run.config, run.models, env, options);
  VarianceEntry e;
  e.episode = static_cast<std::int64_t>(run.episodes_completed);
  e.prd_variance = kernels::parallel::column_variance(s.prd);
  e.shared_variance = kernels::parallel::column_variance(s.shared);
  e.prd = summarize_variance(e.prd_variance);
  e.shared = summarize_variance(e.shared_variance);
  e.ratio_median = median(variance_ratio(e.prd_variance, e.shared_variance));
  return e;
}

VarianceReport gradient_variance_dir(const std::filesystem::path& dir, const std::optional<envs::EnvSpec>& env,
                                     const VarianceOptions& options, bool skip_initial) {
  if (!std::filesystem::is_directory(dir)) throw FormatError("not a checkpoint directory: " + dir.string());
  static const std::regex kName(R"(ckpt_(\d+)\.bin)");
  std::map<std::int64_t, std::filesystem::path> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, kName)) found[std::stoll(m[1])] = entry.path();
  }
  if (found.empty()) throw FormatError("no ckpt_<episode>.bin files in " + dir.string());
  VarianceReport report;
  for (const auto& [episode, path] : found) {
    if (skip_initial && episode == 0) continue;
    const train::LoadedRun run = train::load_run(path);
    const envs::Environment e(env ? *env : run.config.env);
    report.entries.push_back(gradient_variance(run, e, options));
  }
  return report;
}

std::string variance_csv(const VarianceReport& report) {
  std::string s = "episode,variant,median_var,mean_var,max_var,ratio_median\n";
  char buf[160];
  for (const auto& e : report.entries) {
    std::snprintf(buf, sizeof buf, "%lld,prd_ac,%.17g,%.17g,%.17g,%.17g\n", static_cast<long long>(e.episode),
                  e.prd.median, e.prd.mean, e.prd.max, e.ratio_median);
    s += buf;
    std::snprintf(buf, sizeof buf, "%lld,shared_ac_gae,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(e.episode), e.shared.median, e.shared.mean, e.shared.max, 1.0);
    s += buf;
  }
  return s;
}

void write_variance_csv(const VarianceReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open variance report for writing: " + path.string());
  out << variance_csv(report);
}

}  // namespace prd::analysis
