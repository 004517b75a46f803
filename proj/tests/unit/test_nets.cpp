#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "prd/core/error.hpp"
#include "prd/nets/actor.hpp"
#include "prd/nets/adam.hpp"
#include "prd/nets/attention_critic.hpp"
#include "prd/nets/checkpoint.hpp"
#include "prd/nets/coma_critic.hpp"
#include "prd/nets/huber.hpp"

using namespace prd;
using namespace prd::nets;
using prd::test::central_difference;
using prd::test::max_relative_error;

namespace {

CriticInput random_input(int m, CounterRng& rng) {
  return make_critic_input(test::random_state(m, rng), test::random_action(m, rng),
                           test::random_policies(m, rng));
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("prd_nets_" + name);
}

}  // namespace

TEST(ParameterSet, SegmentsTileTheVector) {
  ParameterSet p;
  p.add("a", 3, 2);
  p.add("b", 4, 1);
  EXPECT_EQ(p.size(), 10);
  EXPECT_EQ(p.segments()[1].offset, 6);
  EXPECT_NO_THROW(p.validate());
  p.view(1)(2, 0) = 5.0;
  EXPECT_EQ(p.values()[8], 5.0);
  EXPECT_EQ(p.find("b"), 1);
}

TEST(ParameterSet, InitIsSeededAndBoundedByFanIn) {
  ParameterSet a, b;
  for (auto* p : {&a, &b}) {
    p->add("w", 8, 16);
    p->add("bias", 8, 1);
    p->init_fan_in(3);
  }
  EXPECT_EQ(a.values(), b.values());
  EXPECT_LE(a.view(0).cwiseAbs().maxCoeff(), 0.25);
  EXPECT_EQ(a.view(1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Huber, HandValues) {
  EXPECT_DOUBLE_EQ(huber(0.5, 1.0), 0.125);
  EXPECT_DOUBLE_EQ(huber(2.0, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(huber(-2.0, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(huber_derivative(0.5, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(huber_derivative(-3.0, 1.0), -1.0);
}

TEST(Actor, ZeroWeightsGiveUniformPolicy) {
  ActorNetwork actor({3, kNumActions, {8}}, 1);
  actor.params().values().setZero();
  CounterRng rng(1);
  const PolicyDistribution pi = actor.forward(test::random_state(3, rng));
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < kNumActions; ++a) EXPECT_DOUBLE_EQ(pi(i, a), 1.0 / kNumActions);
  }
}

TEST(Actor, RowsSumToOne) {
  const ActorNetwork actor({4, kNumActions, {16, 16}}, 2);
  CounterRng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const PolicyDistribution pi = actor.forward(test::random_state(4, rng, 3.0));
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(pi.row(i).sum(), 1.0, 1e-6);
      EXPECT_GE(pi.row(i).minCoeff(), 0.0);
    }
  }
}

TEST(Actor, OwnBlockFirstThenOthersAscending) {
  const ActorNetwork actor({3, kNumActions, {4}}, 2);
  CounterRng rng(3);
  const JointState s = test::random_state(3, rng);
  const Eigen::VectorXd x = actor.input(s, 1);
  EXPECT_EQ(x[0], s.agents[1].position.x);
  EXPECT_EQ(x[6], s.agents[0].position.x);
  EXPECT_EQ(x[12], s.agents[2].position.x);
  EXPECT_EQ(x[5], s.agents[1].goal.y);
}

TEST(Actor, RelabelingOthersWithPermutedWeightsIsInvariant) {
  ActorNetwork actor({3, kNumActions, {8}}, 4);
  ActorNetwork swapped = actor;
  // Swap the input columns of the first layer belonging to the second and
  // third slots, then swap agents 1 and 2 in the state.
  auto w = swapped.params().view(swapped.params().find("actor.l0.w"));
  const Eigen::MatrixXd slot1 = w.middleCols(6, 6), slot2 = w.middleCols(12, 6);
  w.middleCols(6, 6) = slot2;
  w.middleCols(12, 6) = slot1;
  CounterRng rng(5);
  for (int k = 0; k < 50; ++k) {
    JointState s = test::random_state(3, rng);
    JointState t = s;
    std::swap(t.agents[1], t.agents[2]);
    const PolicyDistribution a = actor.forward(s);
    const PolicyDistribution b = swapped.forward(t);
    EXPECT_LT((a.row(0) - b.row(0)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Actor, LogProbGradientMatchesFiniteDifferences) {
  CounterRng rng(6);
  for (int inst = 0; inst < 50; ++inst) {
    ActorNetwork actor({3, kNumActions, {6, 5}}, 100 + inst);
    const JointState s = test::random_state(3, rng);
    const int agent = static_cast<int>(rng.below(3));
    const int action = static_cast<int>(rng.below(kNumActions));
    const GradientVector g = actor.grad_logprob(s, agent, action);
    const Eigen::VectorXd fd =
        central_difference([&] { return actor.log_prob(s, agent, action); }, actor.params().values());
    EXPECT_LT(max_relative_error(g, fd), 1e-4) << "instance " << inst;
  }
}

TEST(Actor, ExpectedScoreIsZero) {
  const ActorNetwork actor({3, kNumActions, {8, 8}}, 7);
  CounterRng rng(7);
  const JointState s = test::random_state(3, rng);
  const PolicyDistribution pi = actor.forward(s);
  for (int i = 0; i < 3; ++i) {
    GradientVector sum = actor.params().zeros_like();
    for (int a = 0; a < kNumActions; ++a) sum += pi(i, a) * actor.grad_logprob(s, i, a);
    EXPECT_LT(sum.norm(), 1e-8);
  }
}

TEST(Actor, DeadInputHasZeroWeightGradient) {
  const ActorNetwork actor({2, kNumActions, {5}}, 8);
  CounterRng rng(8);
  JointState s = test::random_state(2, rng);
  s.agents[0].velocity.x = 0.0;  // input 2 of agent 0's column
  const GradientVector g = actor.grad_logprob(s, 0, 3);
  const auto gw = actor.params().view(actor.params().find("actor.l0.w"), g);
  EXPECT_EQ(gw.col(2).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(gw.col(0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Actor, WeightedScoreIsSumOfScaledScores) {
  const ActorNetwork actor({3, kNumActions, {6}}, 9);
  CounterRng rng(9);
  const JointState s = test::random_state(3, rng);
  const std::vector<int> actions = {1, 4, 0};
  const std::vector<double> coef = {0.5, -2.0, 1.25};
  const GradientVector g = actor.weighted_score(actor.inputs(s), actions, coef);
  GradientVector ref = actor.params().zeros_like();
  for (int i = 0; i < 3; ++i) ref += coef[i] * actor.grad_logprob(s, i, actions[i]);
  EXPECT_LT((g - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Critic, AttentionColumnsAreDistributions) {
  const AttentionCritic critic({4, kNumActions, 16, 16}, 1);
  CounterRng rng(10);
  std::vector<CriticInput> batch;
  for (int k = 0; k < 1000; ++k) batch.push_back(random_input(4, rng));
  for (const auto& out : critic.forward_batch(batch)) {
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(out.attention.col(j).sum(), 1.0, 1e-6);
    EXPECT_GE(out.attention.minCoeff(), 0.0);
    EXPECT_LE(out.attention.maxCoeff(), 1.0);
  }
}

TEST(Critic, RowIIgnoresActionOfAgentI) {
  CounterRng rng(11);
  for (ValueInput vi : {ValueInput::kObservationAction, ValueInput::kActionOnly}) {
    const AttentionCritic critic({4, kNumActions, 16, 8, true, vi}, 2);
    for (int k = 0; k < 200; ++k) {
      const JointState s = test::random_state(4, rng);
      const PolicyDistribution pi = test::random_policies(4, rng);
      JointAction a = test::random_action(4, rng);
      const int i = static_cast<int>(rng.below(4));
      const CriticOutput base = critic.forward(s, a, pi);
      a.actions[i] = (a.actions[i] + 1) % kNumActions;
      const CriticOutput moved = critic.forward(s, a, pi);
      for (int j = 0; j < 4; ++j) EXPECT_EQ(base.values(i, j), moved.values(i, j));
      EXPECT_EQ(base.attention, moved.attention);
    }
  }
}

TEST(Critic, OtherRowsDoReadTheAction) {
  const AttentionCritic critic({3, kNumActions, 8, 8}, 3);
  CounterRng rng(12);
  const JointState s = test::random_state(3, rng);
  const PolicyDistribution pi = test::random_policies(3, rng);
  JointAction a{{0, 1, 2}};
  const CriticOutput base = critic.forward(s, a, pi);
  a.actions[0] = 4;
  const CriticOutput moved = critic.forward(s, a, pi);
  EXPECT_NE(base.values(1, 0), moved.values(1, 0));
}

TEST(Critic, PerfectPredictionHasZeroLossAndGradient) {
  const AttentionCritic critic({3, kNumActions, 8, 8}, 4);
  CounterRng rng(13);
  std::vector<CriticInput> batch;
  for (int t = 0; t < 5; ++t) batch.push_back(random_input(3, rng));
  std::vector<ValueMatrix> targets;
  for (const auto& out : critic.forward_batch(batch)) targets.push_back(out.values);
  const LossAndGrad lg = critic.loss_and_grad(batch, targets, 1.0);
  EXPECT_EQ(lg.loss, 0.0);
  EXPECT_LT(lg.grad.norm(), 1e-10);
}

TEST(Critic, LossGradientMatchesFiniteDifferences) {
  CounterRng rng(14);
  for (int inst = 0; inst < 50; ++inst) {
    const ValueInput vi = inst % 2 == 0 ? ValueInput::kObservationAction : ValueInput::kActionOnly;
    AttentionCritic critic({3, kNumActions, 6, 4, inst % 3 != 0, vi}, 200 + inst);
    std::vector<CriticInput> batch;
    std::vector<ValueMatrix> targets;
    for (int t = 0; t < 3; ++t) {
      batch.push_back(random_input(3, rng));
      targets.push_back(test::random_matrix(3, 3, rng, -2, 2));
    }
    batch.push_back(make_terminal_critic_input(test::random_state(3, rng), test::random_policies(3, rng)));
    targets.push_back(test::random_matrix(3, 3, rng, -2, 2));
    const LossAndGrad lg = critic.loss_and_grad(batch, targets, 1.0);
    const Eigen::VectorXd fd = central_difference(
        [&] { return critic.loss_and_grad(batch, targets, 1.0).loss; }, critic.params().values());
    EXPECT_LT(max_relative_error(lg.grad, fd), 1e-4) << "instance " << inst;
  }
}

TEST(Critic, TerminalInputUsesPoliciesForEveryAgent) {
  CounterRng rng(15);
  const JointState s = test::random_state(3, rng);
  const PolicyDistribution pi = test::random_policies(3, rng);
  const CriticInput in = make_terminal_critic_input(s, pi);
  EXPECT_EQ(in.action_features, pi.transpose());
}

TEST(Critic, RejectsMalformedInputs) {
  const AttentionCritic critic({3, kNumActions, 8, 8}, 4);
  CounterRng rng(16);
  CriticInput in = random_input(3, rng);
  in.policies = test::random_policies(2, rng);
  EXPECT_THROW(critic.forward_batch(std::span<const CriticInput>(&in, 1)), ContractViolation);
}

TEST(ComaCritic, InputLeavesOwnActionBlank) {
  const ComaCritic critic({3, kNumActions, {8}, 1}, 1);
  CounterRng rng(17);
  const JointState s = test::random_state(3, rng);
  const JointAction a{{2, 0, 4}};
  const Eigen::VectorXd x = critic.input(s, a, 1);
  const Eigen::VectorXd acts = x.segment(18, 15);
  EXPECT_EQ(acts.sum(), 2.0);
  EXPECT_EQ(acts[0 * 5 + 2], 1.0);
  EXPECT_EQ(acts.segment(5, 5).sum(), 0.0);
  EXPECT_EQ(acts[2 * 5 + 4], 1.0);
  EXPECT_EQ(x.tail(3), Eigen::Vector3d(0, 1, 0));
}

TEST(ComaCritic, LossGradientMatchesFiniteDifferences) {
  CounterRng rng(18);
  for (int inst = 0; inst < 50; ++inst) {
    const int heads = inst % 2 == 0 ? 1 : 3;
    ComaCritic critic({3, kNumActions, {6, 5}, heads}, 300 + inst);
    Eigen::MatrixXd x(critic.input_dim(), 6);
    std::vector<int> taken;
    for (int c = 0; c < 6; ++c) {
      x.col(c) = critic.input(test::random_state(3, rng), test::random_action(3, rng), c % 3);
      taken.push_back(static_cast<int>(rng.below(kNumActions)));
    }
    const Eigen::MatrixXd targets = test::random_matrix(heads, 6, rng, -2, 2);
    const LossAndGrad lg = critic.loss_and_grad(x, taken, targets, 1.0);
    const Eigen::VectorXd fd = central_difference(
        [&] { return critic.loss_and_grad(x, taken, targets, 1.0).loss; }, critic.params().values());
    EXPECT_LT(max_relative_error(lg.grad, fd), 1e-4) << "instance " << inst;
  }
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  ParameterSet p;
  p.add("w", 3, 3);
  p.init_fan_in(1);
  const Eigen::VectorXd before = p.values();
  AdamState st;
  for (int k = 0; k < 5; ++k) adam_step(p, p.zeros_like(), st, {});
  EXPECT_EQ(p.values(), before);
}

TEST(Adam, ConstantGradientStepsAtLearningRate) {
  ParameterSet p;
  p.add("w", 4, 1);
  AdamState st;
  const AdamConfig cfg{0.01};
  Eigen::VectorXd g(4);
  g << 3.0, -0.2, 10.0, 1e-3;
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd before = p.values();
    adam_step(p, g, st, cfg);
    const Eigen::VectorXd step = before - p.values();
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(step[c]), 0.01, 1e-6 / std::abs(g[c]) + 1e-9);
  }
}

TEST(Adam, DeterministicAndGuardsNonFinite) {
  ParameterSet a, b;
  a.add("w", 5, 1);
  b.add("w", 5, 1);
  AdamState sa, sb;
  CounterRng rng(19);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd g = test::random_matrix(5, 1, rng);
    adam_step(a, g, sa, {});
    adam_step(b, g, sb, {});
  }
  EXPECT_EQ(a.values(), b.values());
  EXPECT_TRUE(sa == sb);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(5);
  bad[2] = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd before = a.values();
  EXPECT_THROW(adam_step(a, bad, sa, {}), NumericalError);
  EXPECT_EQ(a.values(), before);
}

TEST(Checkpoint, RoundTrip) {
  ActorNetwork actor({3, kNumActions, {8}}, 1);
  AdamState opt = AdamState::zeros(actor.params().size());
  adam_step(actor.params(), actor.params().values(), opt, {});
  Checkpoint ck;
  ck.num_agents = 3;
  ck.num_actions = kNumActions;
  ck.episodes_completed = 42;
  ck.config_json = "{\"x\": 1}";
  ck.networks.push_back(make_blob("actor", actor.params(), opt));
  const auto path = temp_path("roundtrip.bin");
  write_checkpoint(path, ck);
  const Checkpoint back = read_checkpoint(path);
  EXPECT_EQ(back.episodes_completed, 42u);
  EXPECT_EQ(back.config_json, ck.config_json);
  ActorNetwork other({3, kNumActions, {8}}, 2);
  AdamState other_opt;
  load_blob(back.network("actor"), other.params(), other_opt);
  EXPECT_EQ(other.params().values(), actor.params().values());
  EXPECT_TRUE(other_opt == opt);
  std::filesystem::remove(path);
}

TEST(Checkpoint, VersionMismatchAndBadMagic) {
  Checkpoint ck;
  ck.version = kCheckpointVersion + 1;
  const auto path = temp_path("version.bin");
  write_checkpoint(path, ck);
  EXPECT_THROW(read_checkpoint(path), FormatError);
  std::ofstream(path, std::ios::trunc) << "garbage!";
  EXPECT_THROW(read_checkpoint(path), FormatError);
  std::filesystem::remove(path);
}

TEST(Checkpoint, LayoutMismatchIsRejected) {
  ActorNetwork actor({3, kNumActions, {8}}, 1);
  const NetworkBlob blob = make_blob("actor", actor.params(), {});
  ActorNetwork wider({3, kNumActions, {9}}, 1);
  AdamState opt;
  EXPECT_THROW(load_blob(blob, wider.params(), opt), FormatError);
}
