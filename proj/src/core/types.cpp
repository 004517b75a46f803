#include "prd/core/types.hpp"

#include <cmath>
#include <string>

#include "prd/core/error.hpp"

namespace prd {

double Vec2::norm() const { return std::hypot(x, y); }

double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

Vec2 action_direction(int action) {
  switch (action) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    case 2: return {-1.0, 0.0};
    case 3: return {0.0, 1.0};
    case 4: return {0.0, -1.0};
    default: throw ContractViolation("action index out of range: " + std::to_string(action));
  }
}

bool JointState::all_finite() const {
  for (const auto& a : agents) {
    for (double v : {a.position.x, a.position.y, a.velocity.x, a.velocity.y, a.goal.x, a.goal.y}) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

double RewardVector::sum() const {
  double s = 0.0;
  for (double r : rewards) s += r;
  return s;
}

void MmdpConfig::validate() const {
  require(num_agents >= 2, "MmdpConfig: num_agents must be >= 2");
  require(horizon >= 1, "MmdpConfig: horizon must be >= 1");
  require(gamma > 0.0 && gamma <= 1.0, "MmdpConfig: gamma must lie in (0, 1]");
}

void Episode::validate() const {
  require(horizon >= 1, "Episode: horizon must be >= 1");
  require(static_cast<int>(states.size()) == horizon + 1, "Episode: expected horizon + 1 states");
  require(static_cast<int>(actions.size()) == horizon, "Episode: expected horizon actions");
  require(static_cast<int>(rewards.size()) == horizon, "Episode: expected horizon reward vectors");
  require(log_probs.rows() == horizon && log_probs.cols() == num_agents,
          "Episode: log_probs must be horizon x num_agents");
  for (const auto& s : states) {
    require(s.num_agents() == num_agents, "Episode: state has wrong agent count");
    require(s.all_finite(), "Episode: non-finite state");
  }
  for (const auto& a : actions) {
    require(a.num_agents() == num_agents, "Episode: action has wrong agent count");
    for (int idx : a.actions) require(idx >= 0 && idx < num_actions, "Episode: action index out of range");
  }
  for (const auto& r : rewards) {
    require(r.num_agents() == num_agents, "Episode: reward has wrong agent count");
    for (double v : r.rewards) require(std::isfinite(v), "Episode: non-finite reward");
  }
  if (has_critic_outputs()) {
    require(static_cast<int>(value_matrices.size()) == horizon + 1,
            "Episode: expected horizon + 1 value matrices");
    require(static_cast<int>(attention_matrices.size()) == horizon,
            "Episode: expected horizon attention matrices");
    for (const auto& v : value_matrices) {
      require(v.rows() == num_agents && v.cols() == num_agents && v.allFinite(),
              "Episode: malformed value matrix");
    }
    for (const auto& w : attention_matrices) {
      require(w.rows() == num_agents && w.cols() == num_agents && w.allFinite(),
              "Episode: malformed attention matrix");
    }
  }
}

double Episode::total_reward() const {
  double s = 0.0;
  for (const auto& r : rewards) s += r.sum();
  return s;
}

namespace {
bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same_matrices(const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!same_matrix(a[k], b[k])) return false;
  }
  return true;
}
}  // namespace

bool operator==(const Episode& a, const Episode& b) {
  return a.num_agents == b.num_agents && a.horizon == b.horizon && a.num_actions == b.num_actions &&
         a.states == b.states && a.actions == b.actions && a.rewards == b.rewards &&
         same_matrix(a.log_probs, b.log_probs) && same_matrices(a.value_matrices, b.value_matrices) &&
         same_matrices(a.attention_matrices, b.attention_matrices);
}

}  // namespace prd
