#include <gtest/gtest.h>

#include <memory>

#include "planmerge/agents.hpp"
#include "test_support.hpp"

using namespace planmerge;

namespace {

const PlanDims kDims{2, 2, 2};
const Plan kOptimal{{0, 0, 0}, {0, 0, 1}};
const Plan kHalfWrong{{1, 1, 0}, {1, 0, 1}};  // raw 3 of 6 -> normalized 0.5

EvaluationContext context(double max_time = 100, bool zero_noise = true) {
  return EvaluationContext{kDims, DistanceWeights{1, 1, 1}, ReputationParams{10, max_time},
                           zero_noise};
}

std::vector<AgentId> roster(int n) {
  std::vector<AgentId> r;
  for (int i = 0; i < n; ++i) r.push_back(AgentId::op(i));
  return r;
}

struct Fixture {
  support::World world;
  std::vector<std::unique_ptr<OperatorAgent>> ops;
  std::vector<std::unique_ptr<NodeAgent>> nodes;

  Fixture(int num_ops, int num_nodes, OperatorSettings settings, EvaluationContext ctx,
          const Plan& own_plan = kHalfWrong, double initial_time = 0.0) {
    for (int o = 0; o < num_ops; ++o) {
      ops.push_back(std::make_unique<OperatorAgent>(o, 1, 0, settings, roster(num_ops)));
      ops.back()->seed_history(0, HistoryEntry{own_plan, 0.5}, ExpertiseRecord{1.0, 1});
      world.operators.push_back(ops.back().get());
    }
    for (int n = 0; n < num_nodes; ++n) {
      NodeAgentState s;
      s.node_id = n;
      s.time_until_next_plan = initial_time;
      nodes.push_back(std::make_unique<NodeAgent>(s, kOptimal, ctx, Rng::stream(1, "node", n),
                                                  roster(num_ops)));
      world.nodes.push_back(nodes.back().get());
    }
  }

  // One engine tick restricted to the phases under test.
  void tick() {
    for (auto& n : nodes) {
      if (!n->state().current_operator) {
        n->seek_operator(world.bus);
      } else {
        n->signal_plan_needed(world.bus);
      }
    }
    world.deliver();
    for (auto& n : nodes) n->close_call_for_proposals(world.bus);
    world.deliver();
    for (auto& n : nodes) n->advance_clock();
  }
};

OperatorSettings settings(MergeMethod m) {
  OperatorSettings s;
  s.method = m;
  s.rep_params = ReputationParams{10, 100};
  return s;
}

}  // namespace

TEST(SeekOperator, OneNodeTwentyOperators) {
  Fixture f(20, 1, settings(MergeMethod::kOwnHistory), context(), kHalfWrong, 5.0);
  f.tick();
  EXPECT_EQ(f.world.count<CallForProposal>(), 20);
  EXPECT_EQ(f.world.count<OperatorProposal>(), 20);
  EXPECT_EQ(f.world.count<AcceptProposal>(), 1);
  EXPECT_EQ(f.world.count<RejectProposal>(), 19);
  ASSERT_TRUE(f.nodes[0]->state().current_operator);
  int operating = 0;
  for (const auto& op : f.ops) {
    operating += static_cast<int>(op->state().operated_nodes.size());
    EXPECT_EQ(op->reserved(), 0);
  }
  EXPECT_EQ(operating, 1);
  EXPECT_EQ(f.world.bus.open_exchanges(), 0u);
}

TEST(SeekOperator, NoOperatorsLeavesNodeUnassigned) {
  Fixture f(0, 1, settings(MergeMethod::kOwnHistory), context());
  f.tick();
  EXPECT_FALSE(f.nodes[0]->state().current_operator);
  EXPECT_FALSE(f.nodes[0]->call_open());
}

TEST(SeekOperator, BusyOperatorsDoNotPropose) {
  Fixture f(1, 2, settings(MergeMethod::kOwnHistory), context(), kHalfWrong, 50.0);
  f.tick();  // node0 takes the only operator
  EXPECT_TRUE(f.nodes[0]->state().current_operator);
  EXPECT_FALSE(f.nodes[1]->state().current_operator);
  f.tick();
  EXPECT_FALSE(f.nodes[1]->state().current_operator);
  EXPECT_EQ(f.ops[0]->state().operated_nodes.size(), 1u);
}

TEST(SeekOperator, TwoNodesTwoOperatorsPerfectMatching) {
  Fixture f(2, 2, settings(MergeMethod::kOwnHistory), context(), kHalfWrong, 50.0);
  for (int i = 0; i < 4; ++i) f.tick();
  ASSERT_TRUE(f.nodes[0]->state().current_operator);
  ASSERT_TRUE(f.nodes[1]->state().current_operator);
  EXPECT_NE(*f.nodes[0]->state().current_operator, *f.nodes[1]->state().current_operator);
  for (const auto& op : f.ops) EXPECT_EQ(op->state().operated_nodes.size(), 1u);
}

TEST(SignalPlanNeeded, FiresOnlyWhenExpired) {
  Fixture f(1, 1, settings(MergeMethod::kOwnHistory), context(), kHalfWrong, 3.0);
  f.tick();  // assignment only
  MessageBus& bus = f.world.bus;
  EXPECT_FALSE(f.nodes[0]->signal_plan_needed(bus));  // 2 ticks left
  support::World other;
  NodeAgentState s;
  s.current_operator = AgentId::op(0);
  NodeAgent ready(s, kOptimal, context(), Rng(1), roster(1));
  EXPECT_TRUE(ready.signal_plan_needed(other.bus));
  EXPECT_EQ(other.count<PlanNeeded>(), 1);
  EXPECT_FALSE(ready.signal_plan_needed(other.bus));  // already waiting
}

TEST(SignalPlanNeeded, ReEmittedAfterTheReportedTime) {
  // Normalized error 0.5 with max_time 148 gives a next time of exactly 74.
  Fixture f(1, 1, settings(MergeMethod::kOwnHistory), context(148));
  f.tick();  // tick 0: assignment
  std::vector<int> emitted;
  for (int t = 1; t < 200; ++t) {
    const int before = f.world.count<PlanNeeded>();
    f.tick();
    if (f.world.count<PlanNeeded>() > before) emitted.push_back(t);
  }
  ASSERT_GE(emitted.size(), 2u);
  EXPECT_EQ(emitted[0], 1);
  EXPECT_EQ(emitted[1] - emitted[0], 74);
}

TEST(GatherAndPlan, MethodZeroSkipsQueries) {
  Fixture f(3, 1, settings(MergeMethod::kOwnHistory), context());
  f.tick();
  f.tick();
  EXPECT_EQ(f.world.count<RequestExecution>(), 1);
  EXPECT_EQ(f.world.count<QueryRecommenders>(), 0);
  EXPECT_EQ(f.world.count<QueryExpertise>(), 0);
  EXPECT_EQ(f.world.count<QueryRecommendation>(), 0);
}

TEST(GatherAndPlan, NineteenRecommendersPlusOwnPlan) {
  Fixture f(20, 1, settings(MergeMethod::kBestPlan), context());
  std::size_t candidates = 0;
  int own = 0;
  for (auto& op : f.ops) {
    op->set_merge_listener([&](AgentId, AgentId, std::span<const Candidate> c, const Plan&) {
      candidates = c.size();
      for (const auto& x : c) own += x.is_own;
    });
  }
  f.tick();
  f.tick();
  EXPECT_EQ(candidates, 20u);
  EXPECT_EQ(own, 1);
  EXPECT_EQ(f.world.count<QueryRecommenders>(), 19);
  EXPECT_EQ(f.world.count<QueryExpertise>(), 19);
  EXPECT_EQ(f.world.count<QueryRecommendation>(), 19);
  EXPECT_EQ(f.world.bus.open_exchanges(), 0u);
}

TEST(GatherAndPlan, EmptyRecommendationsFallBackToOwnHistory) {
  OperatorSettings s = settings(MergeMethod::kStepVote);
  support::World world;
  // op0 has history for type 0; op1 and op2 specialize in type 0 but never worked on it.
  OperatorAgent op0(0, 1, 0, s, roster(3)), op1(1, 1, 0, s, roster(3)), op2(2, 1, 0, s, roster(3));
  op0.seed_history(0, HistoryEntry{kHalfWrong, 0.2}, {1.0, 1});
  op0.seed_history(0, HistoryEntry{kOptimal, 0.9}, {1.0, 1});
  op0.seed_history(0, HistoryEntry{kHalfWrong, 0.4}, {1.0, 1});
  op1.seed_history(1, HistoryEntry{kOptimal, 1.0}, {1.0, 1});
  bool merged = false;
  op0.set_merge_listener([&](auto...) { merged = true; });
  world.operators = {&op0, &op1, &op2};
  NodeAgentState ns;
  NodeAgent node(ns, kOptimal, context(), Rng(1), roster(1));  // calls op0 only
  world.nodes = {&node};

  node.seek_operator(world.bus);
  world.deliver();
  node.close_call_for_proposals(world.bus);
  world.deliver();
  ASSERT_EQ(node.state().current_operator, op0.id());

  node.signal_plan_needed(world.bus);
  world.deliver();
  EXPECT_FALSE(merged);
  int requests = 0;
  for (const auto& m : world.log) {
    if (const auto* r = std::get_if<RequestExecution>(&m.payload)) {
      ++requests;
      EXPECT_EQ(r->plan, kOptimal);  // best own entry, success 0.9
    }
  }
  EXPECT_EQ(requests, 1);
  EXPECT_EQ(world.count<InformRecommendation>(), 2);
}

TEST(RequestExecution, OptimalPlanZeroNoise) {
  Fixture f(1, 1, settings(MergeMethod::kOwnHistory), context(), kOptimal);
  f.tick();
  f.tick();
  const auto& st = f.ops[0]->state();
  const auto& history = st.plan_history_by_type.at(0);
  EXPECT_EQ(history.size(), 2u);
  EXPECT_EQ(history.back().observed_success, 1.0);
  EXPECT_EQ(st.expertise_by_type.at(0).local, 1.0);
  EXPECT_EQ(st.expertise_by_type.at(0).global, 2);
  // Perfect plan: time 0, so the next request comes on the very next tick.
  f.tick();
  EXPECT_EQ(f.world.count<RequestExecution>(), 2);
  EXPECT_EQ(f.ops[0]->state().expertise_by_type.at(0).global, 3);
}

TEST(RequestExecution, OneHistoryEntryPerExecution) {
  OperatorSettings s = settings(MergeMethod::kOwnHistory);
  s.history_depth = 10;
  Fixture f(1, 1, s, context(1.0), kHalfWrong);
  f.tick();
  for (int i = 0; i < 6; ++i) f.tick();
  const int executions = f.world.count<InformExecutionResult>();
  EXPECT_GE(executions, 2);
  EXPECT_EQ(static_cast<int>(f.ops[0]->state().plan_history_by_type.at(0).size()), 1 + executions);
  EXPECT_EQ(f.ops[0]->state().expertise_by_type.at(0).global, 1 + executions);
}

TEST(RequestExecution, GlobalExpertiseCapsAtThreshold) {
  OperatorSettings s = settings(MergeMethod::kOwnHistory);
  s.rep_params.global_threshold = 2;
  EvaluationContext ctx = context(1.0);
  ctx.rep_params.global_threshold = 2;
  Fixture f(1, 1, s, ctx, kOptimal);
  for (int i = 0; i < 6; ++i) f.tick();
  EXPECT_EQ(f.ops[0]->state().expertise_by_type.at(0).global, 2);
}

TEST(EvaluateExecution, PerfectPlanZeroChain) {
  NodeAgentState s;
  s.time_until_next_plan = 10;
  NodeAgent node(s, kOptimal, context(100, false), Rng(3), roster(1));
  const auto r = node.evaluate_execution(RequestExecution{kOptimal, {1.0, 2}});
  EXPECT_EQ(r.perceived_result, 0.0);
  EXPECT_EQ(r.next_time, 0.0);
  EXPECT_EQ(r.noise_stddev, 0.0);
  EXPECT_EQ(node.state().time_until_next_plan, 0.0);
}

TEST(EvaluateExecution, HalfErrorGivesHalfTime) {
  NodeAgent node(NodeAgentState{}, kOptimal, context(100, true), Rng(3), roster(1));
  const auto r = node.evaluate_execution(RequestExecution{kHalfWrong, {1.0, 1}});
  EXPECT_EQ(r.perceived_result, 0.5);
  EXPECT_EQ(r.next_time, 50.0);
  EXPECT_DOUBLE_EQ(r.noise_stddev, 0.5);
}

TEST(EvaluateExecution, DeterministicPerSeed) {
  NodeAgent a(NodeAgentState{}, kOptimal, context(100, false), Rng::stream(5, "node", 0), roster(1));
  NodeAgent b(NodeAgentState{}, kOptimal, context(100, false), Rng::stream(5, "node", 0), roster(1));
  const RequestExecution req{kHalfWrong, {0.7, 3}};
  const auto ra = a.evaluate_execution(req);
  const auto rb = b.evaluate_execution(req);
  EXPECT_EQ(ra.perceived_result, rb.perceived_result);
  EXPECT_EQ(ra.next_time, rb.next_time);
}

TEST(EvaluateExecution, MalformedPlanRefused) {
  NodeAgent node(NodeAgentState{}, kOptimal, context(), Rng(3), roster(1));
  EXPECT_THROW(node.evaluate_execution(RequestExecution{Plan{{0, 0, 0}}, {1.0, 1}}),
               ProtocolViolation);
  EXPECT_THROW(node.evaluate_execution(RequestExecution{Plan{{0, 5, 0}, {0, 0, 0}}, {1.0, 1}}),
               ProtocolViolation);
}

TEST(Protocol, WarmRoundMessageCount) {
  // 4 operators, one node: R = 3 recommenders.
  Fixture f(4, 1, settings(MergeMethod::kStepVote), context(1.0));
  f.tick();  // assign
  f.tick();  // cold round: discovery + queries + execution
  ASSERT_EQ(f.world.count<InformExecutionResult>(), 1);
  f.world.log.clear();
  while (f.world.count<InformExecutionResult>() == 0) f.tick();
  const int r = 3;
  EXPECT_EQ(f.world.count<QueryRecommenders>(), 0);
  EXPECT_EQ(f.world.count<QueryExpertise>(), r);
  EXPECT_EQ(f.world.count<InformExpertise>(), r);
  EXPECT_EQ(f.world.count<QueryRecommendation>(), r);
  EXPECT_EQ(f.world.count<InformRecommendation>(), r);
  EXPECT_EQ(f.world.count<PlanNeeded>(), 1);
  EXPECT_EQ(f.world.count<RequestExecution>(), 1);
  EXPECT_EQ(f.world.count<InformExecutionResult>(), 1);
  EXPECT_EQ(static_cast<int>(f.world.log.size()), 4 * r + 3);
}

TEST(Protocol, ExpertiseReportsAreHonest) {
  Fixture f(5, 1, settings(MergeMethod::kBestPlan), context(1.0, false));
  for (int i = 0; i < 6; ++i) f.tick();
  int checked = 0;
  for (const auto& m : f.world.log) {
    if (const auto* e = std::get_if<InformExpertise>(&m.payload)) {
      // Only the planning operator executes; the recommenders' records never change.
      EXPECT_EQ(e->expertise, f.ops[m.sender.index]->state().expertise_by_type.at(0));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Protocol, PlanNeededFromStrangerIsRejected) {
  OperatorAgent op(0, 1, 0, settings(MergeMethod::kOwnHistory), roster(1));
  MessageBus bus;
  const ProtocolMessage msg{AgentId::node(3), op.id(), bus.open_conversation(), PlanNeeded{3, 0, 0}};
  EXPECT_THROW(op.handle(msg, bus), ProtocolViolation);
}
