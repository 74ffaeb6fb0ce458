#include <gtest/gtest.h>

#include "planmerge/bus.hpp"

using namespace planmerge;

namespace {
const AgentId kOp = AgentId::op(0);
const AgentId kPeer = AgentId::op(1);
const AgentId kNode = AgentId::node(0);
}  // namespace

TEST(MessageBus, FifoDelivery) {
  MessageBus bus;
  bus.send({kNode, kOp, bus.open_conversation(), CallForProposal{}});
  bus.send({kNode, kPeer, bus.open_conversation(), CallForProposal{}});
  EXPECT_EQ(bus.next()->receiver, kOp);
  EXPECT_EQ(bus.next()->receiver, kPeer);
  EXPECT_FALSE(bus.next());
}

TEST(MessageBus, QueryAnsweredOnceClosesExchange) {
  MessageBus bus;
  const auto conv = bus.open_conversation();
  bus.send({kOp, kPeer, conv, QueryExpertise{0}});
  EXPECT_EQ(bus.open_exchanges(), 1u);
  bus.send({kPeer, kOp, conv, InformExpertise{0, {}}});
  EXPECT_EQ(bus.open_exchanges(), 0u);
  EXPECT_THROW(bus.send({kPeer, kOp, conv, InformExpertise{0, {}}}), ProtocolViolation);
}

TEST(MessageBus, ReplyMustComeFromAddressee) {
  MessageBus bus;
  const auto conv = bus.open_conversation();
  bus.send({kOp, kPeer, conv, QueryRecommendation{0}});
  EXPECT_THROW(bus.send({AgentId::op(2), kOp, conv, InformRecommendation{}}), ProtocolViolation);
}

TEST(MessageBus, WrongReplyKindIsAnOrphan) {
  MessageBus bus;
  const auto conv = bus.open_conversation();
  bus.send({kOp, kPeer, conv, QueryExpertise{0}});
  EXPECT_THROW(bus.send({kPeer, kOp, conv, InformRecommendation{}}), ProtocolViolation);
}

TEST(MessageBus, PlanConversationChainsIntoExecution) {
  MessageBus bus;
  const auto conv = bus.open_conversation();
  bus.send({kNode, kOp, conv, PlanNeeded{0, 0, 0}});
  bus.send({kOp, kNode, conv, RequestExecution{}});
  EXPECT_EQ(bus.open_exchanges(), 1u);
  bus.send({kNode, kOp, conv, InformExecutionResult{}});
  EXPECT_EQ(bus.open_exchanges(), 0u);
  EXPECT_EQ(bus.sent<PlanNeeded>(), 1u);
  EXPECT_EQ(bus.total_sent(), 3u);
}

TEST(MessageBus, ProposalNeedsADecision) {
  MessageBus bus;
  const auto conv = bus.open_conversation();
  bus.send({kNode, kOp, conv, CallForProposal{}});
  EXPECT_EQ(bus.open_exchanges(), 0u);
  bus.send({kOp, kNode, conv, OperatorProposal{1}});
  EXPECT_EQ(bus.open_exchanges(), 1u);
  bus.send({kNode, kOp, conv, RejectProposal{}});
  EXPECT_EQ(bus.open_exchanges(), 0u);
}
