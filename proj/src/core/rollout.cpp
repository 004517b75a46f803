#include "prd/core/rollout.hpp"

#include <string>

#include "prd/core/error.hpp"
#include "prd/core/rng.hpp"

namespace prd {

namespace {
constexpr std::uint64_t kActionSalt = 0x616374696f6e73ULL;
}

std::vector<PolicyDistribution> episode_policies(const nets::ActorNetwork& actor, const Episode& ep) {
  std::vector<PolicyDistribution> out;
  out.reserve(ep.states.size());
  for (std::size_t t = 0; t < ep.states.size(); ++t) {
    try {
      out.push_back(actor.forward(ep.states[t]));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at timestep " + std::to_string(t));
    }
  }
  return out;
}

std::vector<nets::CriticInput> critic_inputs(const Episode& ep, const std::vector<PolicyDistribution>& policies) {
  require(static_cast<int>(policies.size()) == ep.horizon + 1, "critic_inputs: need horizon + 1 policies");
  std::vector<nets::CriticInput> inputs;
  inputs.reserve(ep.horizon + 1);
  for (int t = 0; t < ep.horizon; ++t) {
    inputs.push_back(nets::make_critic_input(ep.states[t], ep.actions[t], policies[t]));
  }
  inputs.push_back(nets::make_terminal_critic_input(ep.states[ep.horizon], policies[ep.horizon]));
  return inputs;
}

void attach_critic_outputs(Episode& ep, const nets::AttentionCritic& critic,
                           const std::vector<PolicyDistribution>& policies) {
  const auto inputs = critic_inputs(ep, policies);
  auto outputs = critic.forward_batch(inputs);
  ep.value_matrices.clear();
  ep.attention_matrices.clear();
  for (int t = 0; t <= ep.horizon; ++t) {
    ep.value_matrices.push_back(std::move(outputs[t].values));
    if (t < ep.horizon) ep.attention_matrices.push_back(std::move(outputs[t].attention));
  }
}

Episode rollout(const envs::Environment& env, const nets::ActorNetwork& actor,
                const nets::AttentionCritic* critic, const MmdpConfig& cfg, std::uint64_t seed,
                const RolloutOptions& options) {
  cfg.validate();
  require(cfg.num_agents == env.num_agents(), "rollout: config and environment agent counts differ");
  require(actor.config().num_agents == cfg.num_agents, "rollout: actor agent count differs");
  if (critic) require(critic->config().num_agents == cfg.num_agents, "rollout: critic agent count differs");

  const int m = cfg.num_agents;
  CounterRng rng = CounterRng(seed).fork(kActionSalt);

  Episode ep;
  ep.num_agents = m;
  ep.horizon = cfg.horizon;
  ep.num_actions = actor.config().num_actions;
  ep.states.reserve(cfg.horizon + 1);
  ep.actions.reserve(cfg.horizon);
  ep.rewards.reserve(cfg.horizon);
  ep.log_probs.resize(cfg.horizon, m);
  ep.states.push_back(env.reset(seed));

  std::vector<PolicyDistribution> policies;
  policies.reserve(cfg.horizon + 1);
  for (int t = 0; t < cfg.horizon; ++t) {
    const JointState& s = ep.states.back();
    PolicyDistribution pi;
    try {
      pi = actor.forward(s);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at timestep " + std::to_string(t));
    }
    JointAction a;
    a.actions.resize(m);
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd row = pi.row(i).transpose();
      int choice = 0;
      if (options.greedy) {
        row.maxCoeff(&choice);
      } else {
        choice = rng.categorical(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
      }
      a.actions[i] = choice;
      ep.log_probs(t, i) = std::log(row[choice]);
    }
    envs::StepResult step = env.step(s, a);
    if (!step.next.all_finite()) {
      throw NumericalError("environment produced a non-finite state at timestep " + std::to_string(t));
    }
    ep.actions.push_back(std::move(a));
    ep.rewards.push_back(std::move(step.rewards));
    ep.states.push_back(std::move(step.next));
    policies.push_back(std::move(pi));
  }

  if (critic) {
    try {
      policies.push_back(actor.forward(ep.states.back()));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at timestep " + std::to_string(cfg.horizon));
    }
    attach_critic_outputs(ep, *critic, policies);
  }
  return ep;
}

}  // namespace prd
