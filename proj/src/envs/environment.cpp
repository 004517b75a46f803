#include "prd/envs/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prd/core/error.hpp"
#include "prd/core/rng.hpp"

namespace prd::envs {

namespace {

Vec2 uniform_in_box(CounterRng& rng, double half_width) {
  const double x = rng.uniform(-half_width, half_width);
  const double y = rng.uniform(-half_width, half_width);
  return {x, y};
}

Vec2 uniform_on_perimeter(CounterRng& rng, double L) {
  const double s = rng.uniform(0.0, 8.0 * L);
  const double side = std::floor(s / (2.0 * L));
  const double u = s - side * 2.0 * L - L;  // in [-L, L)
  switch (static_cast<int>(side)) {
    case 0: return {u, -L};
    case 1: return {L, u};
    case 2: return {-u, L};
    default: return {-L, -u};
  }
}

void check_action(const JointAction& action, int num_agents) {
  require(action.num_agents() == num_agents, "joint action has wrong agent count");
  for (int a : action.actions) require(a >= 0 && a < kNumActions, "action index out of range");
}

double nearest_region_distance(Vec2 p, const TeamLayout& layout) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : layout.regions) best = std::min(best, distance(p, r.center));
  return best;
}

Vec2 unit(Vec2 v) {
  const double n = v.norm();
  if (n == 0.0) return {0.0, 0.0};
  return (1.0 / n) * v;
}

}  // namespace

bool in_region(Vec2 p, const GoalRegion& region) { return distance(p, region.center) < region.radius; }

JointState reset(const EnvSpec& spec, std::uint64_t seed) {
  const std::uint64_t effective = spec.fixed_reset_seed.value_or(seed);
  CounterRng rng(mix64(effective ^ 0x7265736574000000ULL));
  const double L = spec.arena_half_width;
  JointState s;
  s.agents.resize(spec.num_agents);
  for (int i = 0; i < spec.num_agents; ++i) {
    AgentState& a = s.agents[i];
    switch (spec.family) {
      case Family::kPaired:
        a.position = uniform_in_box(rng, L);
        a.goal = uniform_in_box(rng, L);
        break;
      case Family::kCollisionV1:
      case Family::kCollisionV2:
      case Family::kCollisionV3:
        a.position = uniform_on_perimeter(rng, L);
        a.goal = -1.0 * a.position;
        break;
      case Family::kSocialDilemma: {
        const double x = rng.uniform(-L, L);
        const double y = rng.uniform(-L, -0.7 * L);
        a.position = {x, y};
        a.goal = spec.layout.regions.at(spec.teams.at(i)).center;
        break;
      }
      case Family::kSyntheticDecoupled: {
        a.position = uniform_in_box(rng, 0.7 * L);
        a.goal = uniform_in_box(rng, L);
        const double w = spec.synthetic_angular_rate;
        a.velocity = {-w * a.position.y, w * a.position.x};
        break;
      }
    }
  }
  return s;
}

JointState dynamics_step(const JointState& state, const JointAction& action, const EnvSpec& spec) {
  check_action(action, state.num_agents());
  const double L = spec.arena_half_width;
  JointState next = state;
  for (int i = 0; i < next.num_agents(); ++i) {
    AgentState& a = next.agents[i];
    a.velocity = a.velocity + (spec.accel * spec.dt) * action_direction(action.actions[i]);
    a.position = a.position + spec.dt * a.velocity;
    if (a.position.x > L) { a.position.x = L; a.velocity.x = 0.0; }
    if (a.position.x < -L) { a.position.x = -L; a.velocity.x = 0.0; }
    if (a.position.y > L) { a.position.y = L; a.velocity.y = 0.0; }
    if (a.position.y < -L) { a.position.y = -L; a.velocity.y = 0.0; }
  }
  return next;
}

std::vector<std::pair<int, int>> collision_events(const JointState& state, const EnvSpec& spec) {
  std::vector<std::pair<int, int>> events;
  const int m = state.num_agents();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (distance(state.agents[i].position, state.agents[j].position) < spec.collision_radius) {
        events.emplace_back(i, j);
      }
    }
  }
  return events;
}

RewardVector reward(const JointState& prev, const JointAction& action, const JointState& next,
                    const EnvSpec& spec) {
  const int m = prev.num_agents();
  require(next.num_agents() == m, "reward: state agent counts differ");
  check_action(action, m);
  RewardVector r;
  r.rewards.assign(m, 0.0);
  auto progress = [&](int k) {
    return spec.progress_scale * (distance(prev.agents[k].position, prev.agents[k].goal) -
                                  distance(next.agents[k].position, next.agents[k].goal));
  };

  switch (spec.family) {
    case Family::kPaired:
      for (int i = 0; i < m; ++i) r.rewards[i] = progress(spec.pairing.at(i));
      break;

    case Family::kCollisionV1:
    case Family::kCollisionV2:
    case Family::kCollisionV3: {
      for (int i = 0; i < m; ++i) r.rewards[i] = progress(i);
      for (const auto& [a, b] : collision_events(next, spec)) {
        if (spec.family == Family::kCollisionV1) {
          r.rewards[a] -= spec.collision_penalty;
          r.rewards[b] -= spec.collision_penalty;
        } else if (spec.family == Family::kCollisionV2) {
          for (int k = 0; k < m; ++k) {
            if (k != a && k != b) r.rewards[k] -= spec.collision_penalty;
          }
        } else if (spec.teams[a] == spec.teams[b]) {
          // Cross-team collisions carry no penalty.
          for (int k = 0; k < m; ++k) {
            if (k != a && k != b && spec.teams[k] == spec.teams[a]) r.rewards[k] -= spec.collision_penalty;
          }
        }
      }
      break;
    }

    case Family::kSocialDilemma: {
      const auto& regions = spec.layout.regions;
      std::vector<int> intruders(regions.size(), 0);
      for (int i = 0; i < m; ++i) {
        const Vec2 p0 = prev.agents[i].position;
        const Vec2 p1 = next.agents[i].position;
        r.rewards[i] = spec.progress_scale *
                       (nearest_region_distance(p0, spec.layout) - nearest_region_distance(p1, spec.layout));
        bool inside_any = false;
        for (std::size_t team = 0; team < regions.size(); ++team) {
          if (!in_region(p1, regions[team])) continue;
          inside_any = true;
          if (spec.teams[i] != static_cast<int>(team)) ++intruders[team];
        }
        if (inside_any) r.rewards[i] += spec.goal_bonus;
      }
      for (int i = 0; i < m; ++i) {
        r.rewards[i] -= spec.intrusion_penalty * intruders[spec.teams[i]];
      }
      break;
    }

    case Family::kSyntheticDecoupled:
      for (int i = 0; i < m; ++i) {
        const AgentState& a = prev.agents[i];
        r.rewards[i] = spec.progress_scale * action_direction(action.actions[i]).dot(unit(a.goal - a.position));
      }
      break;
  }
  return r;
}

StepResult synthetic_decoupled_step(const JointState& state, const JointAction& action,
                                    const EnvSpec& spec) {
  require(spec.family == Family::kSyntheticDecoupled,
          "synthetic_decoupled_step: spec is not synthetic_decoupled");
  check_action(action, state.num_agents());
  const double w = spec.synthetic_angular_rate;
  const double c = std::cos(w * spec.dt);
  const double s = std::sin(w * spec.dt);
  StepResult out;
  out.next = state;
  for (auto& a : out.next.agents) {
    const Vec2 p = a.position;
    a.position = {c * p.x - s * p.y, s * p.x + c * p.y};
    a.velocity = {-w * a.position.y, w * a.position.x};
  }
  out.rewards = reward(state, action, out.next, spec);
  return out;
}

Environment::Environment(EnvSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

JointState Environment::reset(std::uint64_t seed) const { return envs::reset(spec_, seed); }

StepResult Environment::step(const JointState& state, const JointAction& action) const {
  require(state.num_agents() == spec_.num_agents, "Environment::step: wrong agent count");
  if (spec_.family == Family::kSyntheticDecoupled) return synthetic_decoupled_step(state, action, spec_);
  StepResult out;
  out.next = dynamics_step(state, action, spec_);
  out.rewards = reward(state, action, out.next, spec_);
  return out;
}

}  // namespace prd::envs
