#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "prd/analysis/gradient_variance.hpp"
#include "prd/analysis/report.hpp"
#include "prd/analysis/svg.hpp"
#include "prd/core/episode_io.hpp"
#include "prd/core/error.hpp"
#include "prd/core/rng.hpp"
#include "prd/core/rollout.hpp"
#include "prd/trainer/evaluate.hpp"
#include "prd/trainer/trainer.hpp"

namespace {

using namespace prd;

// --env takes a path to a JSON env object or the JSON text itself.
envs::EnvSpec parse_env(const std::string& arg, std::uint64_t seed) {
  nlohmann::json j;
  if (!arg.empty() && arg.front() == '{') {
    j = nlohmann::json::parse(arg);
  } else {
    std::ifstream in(arg);
    if (!in) throw ContractViolation("cannot open env spec: " + arg);
    in >> j;
  }
  if (j.contains("env") && j["env"].is_object()) j = j["env"];
  envs::EnvSpec spec = envs::env_spec_from_json(j, seed);
  spec.validate();
  return spec;
}

int run_train(const std::string& config, const std::string& out, const std::string& resume_path,
              std::int64_t episodes, bool quiet) {
  train::TrainOptions opts;
  opts.out_dir = out;
  if (episodes > 0) opts.total_episodes = episodes;
  std::int64_t report_every = 100;
  if (!quiet) {
    opts.on_episode = [&](const train::MetricsRecord& r) {
      if ((r.episode + 1) % report_every == 0) {
        std::fprintf(stderr, "episode %lld  group_reward %.4f  critic_loss %.4g  eps %.4g  set %.2f\n",
                     static_cast<long long>(r.episode + 1), r.group_reward, r.critic_loss, r.epsilon,
                     r.mean_relevant_set_size);
      }
    };
  }
  std::int64_t completed = 0;
  if (!resume_path.empty()) {
    opts.resume = resume_path;
    completed = train::resume(opts).episodes_completed;
  } else {
    completed = train::train(train::load_run_config(config), opts).episodes_completed;
  }
  std::printf("trained %lld episodes into %s\n", static_cast<long long>(completed), out.c_str());
  return 0;
}

int run_eval(const std::string& ckpt, std::int64_t episodes, std::uint64_t seed, const std::string& env_arg,
             bool stochastic) {
  const nets::Checkpoint c = nets::read_checkpoint(ckpt);
  std::optional<envs::EnvSpec> env;
  if (!env_arg.empty()) env = parse_env(env_arg, seed);
  const train::EvalSummary s = train::evaluate(c, env, episodes, seed, !stochastic);
  std::printf("episodes %lld\nmean_group_reward %.10g\nstd_group_reward %.10g\n",
              static_cast<long long>(s.episodes), s.mean_group_reward, s.std_group_reward);
  return 0;
}

int run_render(const std::string& ckpt, const std::string& out, std::uint64_t seed, bool greedy,
               const std::string& bin_out, const std::string& jsonl_out) {
  const train::LoadedRun run = train::load_run(ckpt);
  const envs::Environment env(run.config.env);
  RolloutOptions ro;
  ro.greedy = greedy;
  const nets::AttentionCritic* critic = run.models.critic ? &*run.models.critic : nullptr;
  const Episode ep = rollout(env, run.models.actor, critic, run.config.mmdp(), episode_stream_key(seed, 0), ro);
  std::ofstream svg(out, std::ios::trunc);
  if (!svg) throw FormatError("cannot open " + out);
  svg << analysis::render_episode_svg(ep, run.config.env);
  if (!bin_out.empty()) write_episode_file(bin_out, ep);
  if (!jsonl_out.empty()) {
    std::ofstream j(jsonl_out, std::ios::trunc);
    write_episode_jsonl(j, ep);
  }
  std::printf("group_reward %.10g\n", ep.total_reward());
  return 0;
}

int run_variance(const std::string& dir, const std::string& env_arg, int samples, const std::string& out,
                 std::optional<double> epsilon, std::uint64_t seed, bool skip_initial) {
  analysis::VarianceOptions opts;
  opts.n_samples = samples;
  opts.seed = seed;
  opts.epsilon = epsilon;
  std::optional<envs::EnvSpec> env;
  if (!env_arg.empty()) env = parse_env(env_arg, 0);
  const analysis::VarianceReport r = analysis::gradient_variance_dir(dir, env, opts, skip_initial);
  analysis::write_variance_csv(r, out);
  for (const auto& e : r.entries) {
    std::printf("episode %lld  median_var prd %.4g shared %.4g  ratio_median %.4g\n",
                static_cast<long long>(e.episode), e.prd.median, e.shared.median, e.ratio_median);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PRD actor-critic training and analysis"};
  app.require_subcommand(1);

  std::string config, out = "run", resume_path, ckpt, env_arg, ckpt_dir, bin_out, jsonl_out;
  std::int64_t episodes = 0;
  std::uint64_t seed = 0;
  int samples = 100, window = 100;
  bool quiet = false, stochastic = false, greedy = false, skip_initial = false;
  std::optional<double> epsilon;
  std::vector<std::string> files;

  auto* train_cmd = app.add_subcommand("train", "train a run from a JSON config");
  train_cmd->add_option("--config", config, "run config")->check(CLI::ExistingFile);
  train_cmd->add_option("--out", out, "output directory");
  train_cmd->add_option("--resume", resume_path, "continue from a checkpoint")->check(CLI::ExistingFile);
  train_cmd->add_option("--episodes", episodes, "override total_episodes");
  train_cmd->add_flag("--quiet", quiet);

  auto* eval_cmd = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  eval_cmd->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--episodes", episodes)->required();
  eval_cmd->add_option("--seed", seed);
  eval_cmd->add_option("--env", env_arg, "env spec (JSON file or text); default from checkpoint");
  eval_cmd->add_flag("--stochastic", stochastic, "sample actions instead of argmax");

  auto* render_cmd = app.add_subcommand("render", "render one episode to SVG");
  render_cmd->add_option("--ckpt", ckpt)->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--out", out)->required();
  render_cmd->add_option("--seed", seed);
  render_cmd->add_flag("--greedy", greedy);
  render_cmd->add_option("--episode-bin", bin_out, "also write the episode record");
  render_cmd->add_option("--episode-jsonl", jsonl_out, "also write a per-timestep JSONL dump");

  auto* var_cmd = app.add_subcommand("variance", "gradient variance of prd_ac vs shared_ac_gae");
  var_cmd->add_option("--ckpt-dir", ckpt_dir)->required()->check(CLI::ExistingDirectory);
  var_cmd->add_option("--env", env_arg);
  var_cmd->add_option("--samples", samples);
  var_cmd->add_option("--out", out)->required();
  var_cmd->add_option("--epsilon", epsilon);
  var_cmd->add_option("--seed", seed);
  var_cmd->add_flag("--skip-initial", skip_initial, "ignore ckpt_0.bin");

  auto* report_cmd = app.add_subcommand("report", "SVG learning curves from metrics files");
  report_cmd->add_option("files", files)->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--out", out)->required();
  report_cmd->add_option("--window", window);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      if (config.empty() && resume_path.empty()) throw CLI::RequiredError("--config");
      return run_train(config, out, resume_path, episodes, quiet);
    }
    if (*eval_cmd) return run_eval(ckpt, episodes, seed, env_arg, stochastic);
    if (*render_cmd) return run_render(ckpt, out, seed, greedy, bin_out, jsonl_out);
    if (*var_cmd) return run_variance(ckpt_dir, env_arg, samples, out, epsilon, seed, skip_initial);
    if (*report_cmd) {
      std::vector<std::filesystem::path> paths(files.begin(), files.end());
      analysis::report(paths, out, window);
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
