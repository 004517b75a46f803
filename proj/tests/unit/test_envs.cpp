#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "prd/core/error.hpp"
#include "prd/core/returns.hpp"
#include "prd/envs/environment.hpp"

using namespace prd;
using namespace prd::envs;

namespace {

JointState still_state(int m) {
  JointState s;
  s.agents.resize(m);
  for (int i = 0; i < m; ++i) {
    s.agents[i].position = {-0.9 + 0.25 * i, 0.0};
    s.agents[i].goal = {0.5, 0.5};
  }
  return s;
}

JointAction zeros(int m) { return JointAction{std::vector<int>(m, 0)}; }

// Places agents a and b on top of each other and everyone else far apart.
JointState with_collision(int m, int a, int b) {
  JointState s = still_state(m);
  s.agents[b].position = s.agents[a].position + Vec2{0.01, 0.0};
  return s;
}

int count_penalized(const RewardVector& r, double penalty) {
  int n = 0;
  for (double v : r.rewards) n += v <= -penalty + 1e-9 ? 1 : 0;
  return n;
}

}  // namespace

TEST(EnvSpec, DefaultSpecsValidate) {
  for (Family f : {Family::kPaired, Family::kCollisionV1, Family::kCollisionV2, Family::kSocialDilemma,
                   Family::kSyntheticDecoupled}) {
    EXPECT_NO_THROW(make_env_spec(f, 8, 1).validate()) << to_string(f);
  }
  EXPECT_NO_THROW(make_env_spec(Family::kCollisionV3, 9, 1).validate());
  EXPECT_NO_THROW(make_env_spec(Family::kCollisionV3, 24, 1).validate());
}

TEST(EnvSpec, PairingIsFixedPointFreeInvolution) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = random_pairing(8, seed);
    ASSERT_EQ(p.size(), 8u);
    for (int i = 0; i < 8; ++i) {
      EXPECT_NE(p[i], i);
      EXPECT_EQ(p[p[i]], i);
    }
  }
}

TEST(EnvSpec, BrokenInvariantsThrow) {
  EnvSpec paired = make_env_spec(Family::kPaired, 4, 0);
  paired.pairing = {1, 0, 2, 3};
  EXPECT_THROW(paired.validate(), ContractViolation);
  paired.pairing = {1, 2, 3, 0};
  EXPECT_THROW(paired.validate(), ContractViolation);
  EXPECT_THROW(make_env_spec(Family::kPaired, 5, 0).validate(), ContractViolation);

  EnvSpec v3 = make_env_spec(Family::kCollisionV3, 6, 0);
  v3.teams = {0, 0, 0, 1, 1, 2};
  EXPECT_THROW(v3.validate(), ContractViolation);

  EnvSpec social = make_env_spec(Family::kSocialDilemma, 4, 0);
  social.layout.regions[1] = social.layout.regions[0];
  EXPECT_THROW(social.validate(), ContractViolation);
}

TEST(EnvSpec, JsonRoundTripAndUnknownKey) {
  const EnvSpec spec = make_env_spec(Family::kCollisionV3, 6, 3);
  const EnvSpec back = env_spec_from_json(to_json(spec));
  EXPECT_EQ(to_json(back), to_json(spec));
  nlohmann::json j = to_json(spec);
  j["colision_penalty"] = 2.0;
  EXPECT_THROW(env_spec_from_json(j), ContractViolation);
}

TEST(Reset, CollisionGoalIsPointReflection) {
  const EnvSpec spec = make_env_spec(Family::kCollisionV1, 8, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const JointState s = reset(spec, seed);
    for (const auto& a : s.agents) {
      EXPECT_EQ(a.goal, (Vec2{-a.position.x, -a.position.y}));
      const bool on_edge = std::abs(std::abs(a.position.x) - 1.0) < 1e-12 ||
                           std::abs(std::abs(a.position.y) - 1.0) < 1e-12;
      EXPECT_TRUE(on_edge);
    }
  }
}

TEST(Reset, SameSeedSameState) {
  for (Family f : {Family::kPaired, Family::kCollisionV2, Family::kSocialDilemma, Family::kSyntheticDecoupled}) {
    const EnvSpec spec = make_env_spec(f, 8, 0);
    EXPECT_EQ(reset(spec, 99), reset(spec, 99));
    EXPECT_FALSE(reset(spec, 99) == reset(spec, 100));
  }
}

TEST(Reset, FixedResetSeedIgnoresArgument) {
  EnvSpec spec = make_env_spec(Family::kPaired, 4, 0);
  spec.fixed_reset_seed = 5;
  EXPECT_EQ(reset(spec, 1), reset(spec, 2));
}

TEST(Reset, SocialStartsOppositeGoals) {
  const EnvSpec spec = make_env_spec(Family::kSocialDilemma, 8, 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const JointState s = reset(spec, seed);
    for (int i = 0; i < 8; ++i) {
      EXPECT_LT(s.agents[i].position.y, -0.7 + 1e-12);
      EXPECT_GT(s.agents[i].goal.y, 0.0);
      EXPECT_EQ(s.agents[i].goal, spec.layout.regions[spec.teams[i]].center);
    }
  }
}

TEST(Dynamics, ZeroAccelerationKinematics) {
  EnvSpec spec = make_env_spec(Family::kPaired, 2, 0);
  JointState s = still_state(2);
  s.agents[0].position = {0.0, 0.0};
  s.agents[0].velocity = {1.0, 0.0};
  const JointState n = dynamics_step(s, zeros(2), spec);
  EXPECT_NEAR(n.agents[0].position.x, 0.1, 1e-15);
  EXPECT_EQ(n.agents[0].position.y, 0.0);
  EXPECT_EQ(n.agents[1].position, s.agents[1].position);
}

TEST(Dynamics, AccelerationThenPosition) {
  EnvSpec spec = make_env_spec(Family::kPaired, 2, 0);
  JointState s = still_state(2);
  s.agents[0].position = {0.0, 0.0};
  const JointState n = dynamics_step(s, JointAction{{3, 0}}, spec);  // -x
  EXPECT_NEAR(n.agents[0].velocity.x, 0.0, 1e-15);
  EXPECT_NEAR(n.agents[0].velocity.y, 0.1, 1e-15);
  EXPECT_NEAR(n.agents[0].position.y, 0.01, 1e-15);
}

TEST(Dynamics, WallClampZeroesNormalVelocity) {
  EnvSpec spec = make_env_spec(Family::kPaired, 2, 0);
  JointState s = still_state(2);
  s.agents[0].position = {0.99, 0.0};
  s.agents[0].velocity = {1.0, 0.5};
  const JointState n = dynamics_step(s, zeros(2), spec);
  EXPECT_EQ(n.agents[0].position.x, 1.0);
  EXPECT_EQ(n.agents[0].velocity.x, 0.0);
  EXPECT_EQ(n.agents[0].velocity.y, 0.5);
}

TEST(Dynamics, RandomWalkStaysInArena) {
  EnvSpec spec = make_env_spec(Family::kPaired, 8, 0);
  CounterRng rng(4);
  JointState s = reset(spec, 4);
  for (int t = 0; t < 100; ++t) {
    s = dynamics_step(s, test::random_action(8, rng), spec);
    for (const auto& a : s.agents) {
      ASSERT_LE(std::abs(a.position.x), 1.0);
      ASSERT_LE(std::abs(a.position.y), 1.0);
    }
  }
}

TEST(Reward, PairedOwnMotionWithStillPartnerIsZero) {
  const EnvSpec spec = make_env_spec(Family::kPaired, 4, 2);
  JointState s = still_state(4);
  const int i = 0;
  JointAction a = zeros(4);
  a.actions[i] = 1;
  JointState moved = s;
  moved.agents[i].position = moved.agents[i].position + Vec2{0.1, 0.0};
  const RewardVector r = reward(s, a, moved, spec);
  EXPECT_EQ(r.rewards[i], 0.0);
  EXPECT_NEAR(r.rewards[spec.pairing[i]],
              distance(s.agents[i].position, s.agents[i].goal) - distance(moved.agents[i].position, s.agents[i].goal),
              1e-15);
}

TEST(Reward, PairedPerturbingOwnTrajectoryNeverChangesOwnReward) {
  const EnvSpec spec = make_env_spec(Family::kPaired, 8, 2);
  CounterRng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const JointState prev = test::random_state(8, rng);
    const JointState next = test::random_state(8, rng);
    const int i = static_cast<int>(rng.below(8));
    JointState perturbed = next;
    perturbed.agents[i].position = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const JointAction a = test::random_action(8, rng);
    const auto r0 = reward(prev, a, next, spec);
    const auto r1 = reward(prev, a, perturbed, spec);
    EXPECT_EQ(r0.rewards[i], r1.rewards[i]);
    for (int k = 0; k < 8; ++k) {
      if (k != spec.pairing[i]) EXPECT_EQ(r0.rewards[k], r1.rewards[k]);
    }
  }
}

TEST(Reward, CollisionEventsSymmetricAndIrreflexive) {
  const EnvSpec spec = make_env_spec(Family::kCollisionV1, 8, 0);
  CounterRng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const JointState s = test::random_state(8, rng, 0.2);
    std::set<std::pair<int, int>> events;
    for (const auto& [a, b] : collision_events(s, spec)) {
      EXPECT_LT(a, b);
      events.insert({a, b});
    }
    for (int a = 0; a < 8; ++a) {
      for (int b = a + 1; b < 8; ++b) {
        const bool close = distance(s.agents[a].position, s.agents[b].position) < spec.collision_radius;
        EXPECT_EQ(events.count({a, b}) == 1, close);
      }
    }
  }
}

TEST(Reward, CollisionV1PenalizesBothColliders) {
  const EnvSpec spec = make_env_spec(Family::kCollisionV1, 8, 0);
  const JointState next = with_collision(8, 2, 5);
  const RewardVector r = reward(next, zeros(8), next, spec);
  EXPECT_EQ(collision_events(next, spec).size(), 1u);
  for (int k = 0; k < 8; ++k) {
    const double expect = (k == 2 || k == 5) ? -spec.collision_penalty : 0.0;
    EXPECT_NEAR(r.rewards[k], expect, 1e-12) << k;
  }
  EXPECT_EQ(count_penalized(r, spec.collision_penalty), 2);
}

TEST(Reward, CollisionV2PenalizesEveryoneElse) {
  const EnvSpec spec = make_env_spec(Family::kCollisionV2, 8, 0);
  const JointState s = with_collision(8, 2, 5);
  const RewardVector r = reward(s, zeros(8), s, spec);
  for (int k = 0; k < 8; ++k) {
    const double expect = (k == 2 || k == 5) ? 0.0 : -spec.collision_penalty;
    EXPECT_NEAR(r.rewards[k], expect, 1e-12) << k;
  }
  EXPECT_EQ(count_penalized(r, spec.collision_penalty), 6);
}

TEST(Reward, CollisionV3StaysInsideTheTeam) {
  const EnvSpec spec = make_env_spec(Family::kCollisionV3, 9, 0);
  // Teams are {0,1,2}, {3,4,5}, {6,7,8}.
  const JointState s = with_collision(9, 3, 4);
  const RewardVector r = reward(s, zeros(9), s, spec);
  for (int k = 0; k < 9; ++k) {
    const double expect = k == 5 ? -spec.collision_penalty : 0.0;
    EXPECT_NEAR(r.rewards[k], expect, 1e-12) << k;
  }
  const JointState cross = with_collision(9, 0, 6);
  const RewardVector rc = reward(cross, zeros(9), cross, spec);
  for (double v : rc.rewards) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Reward, CollisionProgressIsSigned) {
  const EnvSpec spec = make_env_spec(Family::kCollisionV1, 2, 0);
  JointState s = still_state(2);
  JointState away = s;
  away.agents[0].position = s.agents[0].position - Vec2{0.1, 0.0};
  EXPECT_LT(reward(s, zeros(2), away, spec).rewards[0], 0.0);
}

TEST(Reward, SocialIntrusionHitsEveryMemberOfTheInvadedTeam) {
  const EnvSpec spec = make_env_spec(Family::kSocialDilemma, 4, 0);
  // Teams {0,1} and {2,3}; agent 2 sits inside team 0's region.
  JointState s = still_state(4);
  for (auto& a : s.agents) a.position = {0.0, -0.9};
  s.agents[2].position = spec.layout.regions[0].center;
  const RewardVector r = reward(s, zeros(4), s, spec);
  EXPECT_NEAR(r.rewards[0], -spec.intrusion_penalty, 1e-12);
  EXPECT_NEAR(r.rewards[1], -spec.intrusion_penalty, 1e-12);
  EXPECT_NEAR(r.rewards[2], spec.goal_bonus, 1e-12);
  EXPECT_NEAR(r.rewards[3], 0.0, 1e-12);
}

TEST(Reward, SocialDefectionPaysIndividuallyAndCostsTheGroup) {
  // Scripted policies: everyone parks in its own region except agent 0,
  // which either parks at home or in the other team's region.
  const EnvSpec spec = make_env_spec(Family::kSocialDilemma, 4, 0);
  auto run = [&](bool defect) {
    JointState s = still_state(4);
    for (int i = 0; i < 4; ++i) s.agents[i].position = spec.layout.regions[spec.teams[i]].center;
    // Agent 0 starts below the other team's region, the nearer one.
    s.agents[0].position = {spec.layout.regions[1].center.x, -0.5};
    const Vec2 target = spec.layout.regions[defect ? 1 : 0].center;
    double own = 0.0, group = 0.0, disc = 1.0;
    for (int t = 0; t < 50; ++t) {
      JointState n = s;
      const Vec2 d = target - s.agents[0].position;
      const double step = std::min(0.05, d.norm());
      if (d.norm() > 0) n.agents[0].position = s.agents[0].position + (step / d.norm()) * d;
      const RewardVector r = reward(s, zeros(4), n, spec);
      own += disc * r.rewards[0];
      group += disc * r.sum();
      disc *= 0.99;
      s = n;
    }
    return std::pair{own, group};
  };
  const auto [own_coop, group_coop] = run(false);
  const auto [own_defect, group_defect] = run(true);
  EXPECT_GT(own_defect, own_coop);
  EXPECT_LT(group_defect, group_coop);
}

TEST(Synthetic, OtherAgentsActionsNeverReachAReward) {
  const EnvSpec spec = make_env_spec(Family::kSyntheticDecoupled, 6, 0);
  const Environment env(spec);
  CounterRng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const JointState s = reset(spec, trial);
    JointAction a = test::random_action(6, rng);
    const StepResult base = env.step(s, a);
    const int k = static_cast<int>(rng.below(6));
    a.actions[k] = (a.actions[k] + 1 + static_cast<int>(rng.below(4))) % kNumActions;
    const StepResult changed = env.step(s, a);
    EXPECT_EQ(base.next, changed.next);
    for (int j = 0; j < 6; ++j) {
      if (j != k) EXPECT_EQ(base.rewards.rewards[j], changed.rewards.rewards[j]);
    }
  }
}

TEST(Synthetic, RewardIsSumOfPerAgentTerms) {
  const EnvSpec spec = make_env_spec(Family::kSyntheticDecoupled, 4, 0);
  const Environment env(spec);
  CounterRng rng(2);
  const JointState s = reset(spec, 3);
  const JointAction a = test::random_action(4, rng);
  const RewardVector r = env.step(s, a).rewards;
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vec2 to_goal = s.agents[i].goal - s.agents[i].position;
    const double term = action_direction(a.actions[i]).dot((1.0 / to_goal.norm()) * to_goal);
    EXPECT_NEAR(r.rewards[i], term, 1e-15);
    sum += term;
  }
  EXPECT_NEAR(r.sum(), sum, 1e-12);
}

TEST(Synthetic, StepRejectsOtherFamilies) {
  const EnvSpec spec = make_env_spec(Family::kPaired, 4, 0);
  EXPECT_THROW(synthetic_decoupled_step(still_state(4), zeros(4), spec), ContractViolation);
}
