#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace prd {

// Actions are discrete accelerations {zero, +x, -x, +y, -y}.
inline constexpr int kNumActions = 5;
// Per-agent state block: position (2), velocity (2), goal position (2).
inline constexpr int kStateBlock = 6;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const;
};

double distance(Vec2 a, Vec2 b);

// Unit direction of each discrete action; index 0 is "no acceleration".
Vec2 action_direction(int action);

struct AgentState {
  Vec2 position;
  Vec2 velocity;
  Vec2 goal;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct JointState {
  std::vector<AgentState> agents;

  int num_agents() const { return static_cast<int>(agents.size()); }
  bool all_finite() const;
  friend bool operator==(const JointState&, const JointState&) = default;
};

struct JointAction {
  std::vector<int> actions;

  int num_agents() const { return static_cast<int>(actions.size()); }
  friend bool operator==(const JointAction&, const JointAction&) = default;
};

struct RewardVector {
  std::vector<double> rewards;

  int num_agents() const { return static_cast<int>(rewards.size()); }
  double sum() const;
  friend bool operator==(const RewardVector&, const RewardVector&) = default;
};

// V(i, j): expected future reward of agent j, not conditioned on agent i's
// action.
using ValueMatrix = Eigen::MatrixXd;
// W(k, j): how much agent j attends to agent k. Columns sum to one.
using AttentionMatrix = Eigen::MatrixXd;
// Per-agent categorical distributions, one row per agent.
using PolicyDistribution = Eigen::MatrixXd;

struct MmdpConfig {
  int num_agents = 2;
  int horizon = 100;
  double gamma = 0.99;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// One trajectory. Critic outputs are present when the rollout was given an
// attention critic; value_matrices then has horizon + 1 entries, the last one
// evaluated at the terminal state with every action replaced by the policy.
struct Episode {
  int num_agents = 0;
  int horizon = 0;
  int num_actions = kNumActions;
  std::vector<JointState> states;
  std::vector<JointAction> actions;
  std::vector<RewardVector> rewards;
  Eigen::MatrixXd log_probs;  // horizon x num_agents
  std::vector<ValueMatrix> value_matrices;
  std::vector<AttentionMatrix> attention_matrices;

  bool has_critic_outputs() const { return !value_matrices.empty(); }
  double reward(int t, int agent) const { return rewards[t].rewards[agent]; }
  // Throws ContractViolation if sequence lengths or entries are inconsistent.
  void validate() const;
  double total_reward() const;
  // Exact (bitwise on values) equality of every field.
  friend bool operator==(const Episode& a, const Episode& b);
};

}  // namespace prd
