#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "planmerge/ids.hpp"
#include "planmerge/plan.hpp"
#include "planmerge/reputation.hpp"

namespace planmerge {

// Contract net (node -> operators).
struct CallForProposal {
  int node_type = 0;
  int node_subtype = 0;
};
struct OperatorProposal {
  int spare_capacity = 0;
};
struct AcceptProposal {};
struct RejectProposal {};

// Propose protocol (node -> its operator). Answered by RequestExecution.
struct PlanNeeded {
  int node_id = 0;
  int node_type = 0;
  int node_subtype = 0;
};

// Operator <-> operator queries.
struct QueryRecommenders {
  int node_type = 0;
};
/// Empty list: the responder does not cover the type.
struct InformRecommenders {
  std::vector<AgentId> recommenders;
};
struct QueryExpertise {
  int node_type = 0;
};
struct InformExpertise {
  int node_type = 0;
  ExpertiseRecord expertise;
};
struct QueryRecommendation {
  int node_type = 0;
};
/// No plan: the responder has no history for the type.
struct InformRecommendation {
  int node_type = 0;
  std::optional<Plan> plan;
};

// Request protocol (operator -> node).
struct RequestExecution {
  Plan plan;
  /// The operator's record with this execution already counted.
  ExpertiseRecord expertise;
};
/// Only error-derived scalars cross back from the node.
struct InformExecutionResult {
  double perceived_result = 0.0;
  double next_time = 0.0;
  double noise_stddev = 0.0;
};

using Payload =
    std::variant<CallForProposal, OperatorProposal, AcceptProposal, RejectProposal, PlanNeeded,
                 QueryRecommenders, InformRecommenders, QueryExpertise, InformExpertise,
                 QueryRecommendation, InformRecommendation, RequestExecution,
                 InformExecutionResult>;

struct ProtocolMessage {
  AgentId sender;
  AgentId receiver;
  ConversationId conversation_id = 0;
  Payload payload;
};

class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

std::string_view variant_name(const Payload& payload);

/// True if `payload` opens an exchange that must be answered exactly once.
bool owes_reply(const Payload& payload);

/// True if `reply` is a valid answer to `request`. OperatorProposal is
/// answered by either AcceptProposal or RejectProposal.
bool answers(const Payload& reply, const Payload& request);

}  // namespace planmerge
