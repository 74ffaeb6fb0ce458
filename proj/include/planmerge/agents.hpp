#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "planmerge/bus.hpp"
#include "planmerge/merging.hpp"
#include "planmerge/messages.hpp"
#include "planmerge/plan.hpp"
#include "planmerge/reputation.hpp"
#include "planmerge/rng.hpp"

namespace planmerge {

/// What a node needs to score an execution.
struct EvaluationContext {
  PlanDims dims;
  DistanceWeights weights;
  ReputationParams rep_params;
  bool zero_noise = false;
};

/// One execution as scored by a node. Stays inside the harness; never sent.
struct ExecutionReport {
  int node_id = 0;
  int operator_id = 0;
  int round = 0;  // 1-based
  double raw_error = 0.0;
  double normalized_error = 0.0;
  double improvement = 0.0;
  double perceived_result = 0.0;
  double next_time = 0.0;
};

struct NodeAgentState {
  int node_id = 0;
  int node_type = 0;
  int node_subtype = 0;
  std::optional<AgentId> current_operator;
  double time_until_next_plan = 0.0;
};

class NodeAgent {
 public:
  using ReportSink = std::function<void(const ExecutionReport&)>;

  NodeAgent(NodeAgentState state, Plan optimal_plan, EvaluationContext context, Rng rng,
            std::vector<AgentId> operator_roster);

  const NodeAgentState& state() const { return state_; }
  AgentId id() const { return AgentId::node(state_.node_id); }

  /// Broadcasts a CallForProposal to every operator. No-op when already
  /// assigned or when a call is still open.
  void seek_operator(MessageBus& bus);

  /// Closes an open call: picks one proposer uniformly at random (one draw
  /// from this node's stream), accepts it and rejects the others. Without
  /// proposals the node stays unassigned and calls again later.
  void close_call_for_proposals(MessageBus& bus);

  /// Sends PlanNeeded to the current operator when the plan has expired.
  /// Returns true if a message was sent.
  bool signal_plan_needed(MessageBus& bus);

  /// One clock tick: time_until_next_plan decreases by 1, floored at 0, while
  /// no plan is being prepared.
  void advance_clock();

  void handle(const ProtocolMessage& msg, MessageBus& bus);

  /// Scores `request.plan` against the hidden optimal plan and sets the time
  /// until the next plan. Throws ProtocolViolation for a malformed plan.
  InformExecutionResult evaluate_execution(const RequestExecution& request);

  void set_report_sink(ReportSink sink) { sink_ = std::move(sink); }
  void set_round_limit(int limit) { round_limit_ = limit; }

  int rounds_completed() const { return rounds_completed_; }
  bool awaiting_plan() const { return pending_plan_.has_value(); }
  bool finished() const { return round_limit_ > 0 && rounds_completed_ >= round_limit_; }
  bool call_open() const { return !open_calls_.empty(); }

 private:
  struct Proposal {
    AgentId from;
    ConversationId conversation;
  };

  NodeAgentState state_;
  Plan optimal_plan_;
  EvaluationContext context_;
  Rng rng_;
  std::vector<AgentId> roster_;
  std::set<ConversationId> open_calls_;
  std::vector<Proposal> proposals_;
  std::optional<ConversationId> pending_plan_;
  int rounds_completed_ = 0;
  int round_limit_ = 0;
  ReportSink sink_;
};

struct RecommenderEntry {
  AgentId id;
  std::optional<ExpertiseRecord> expertise;
  std::optional<Plan> last_recommendation;
};

struct OperatorAgentState {
  int operator_id = 0;
  int availability = 1;
  int specialty_type = 0;
  std::set<int> operated_nodes;
  std::map<int, ExpertiseRecord> expertise_by_type;
  std::map<int, std::deque<HistoryEntry>> plan_history_by_type;
  std::map<int, std::vector<RecommenderEntry>> recommender_directory;
};

struct OperatorSettings {
  MergeMethod method = MergeMethod::kOwnHistory;
  int max_recommenders = 20;
  int num_replacements = 1;
  int history_depth = 5;
  bool include_own_plan = true;
  ReputationParams rep_params;
};

class OperatorAgent {
 public:
  /// Called with the candidate set right before a merge.
  using MergeListener = std::function<void(AgentId op, AgentId node,
                                           std::span<const Candidate> candidates,
                                           const Plan& merged)>;

  OperatorAgent(int operator_id, int availability, int specialty_type, OperatorSettings settings,
                std::vector<AgentId> peers);

  const OperatorAgentState& state() const { return state_; }
  AgentId id() const { return AgentId::op(state_.operator_id); }

  /// Installs the result of a previous execution (initialization only).
  void seed_history(int node_type, HistoryEntry entry, ExpertiseRecord expertise);

  void handle(const ProtocolMessage& msg, MessageBus& bus);

  void set_merge_listener(MergeListener listener) { merge_listener_ = std::move(listener); }

  /// Number of CFP proposals awaiting an answer (capacity held for them).
  int reserved() const { return reserved_; }

  /// Plan sessions still in progress.
  std::size_t open_sessions() const { return sessions_.size(); }

 private:
  enum class Phase { kDiscover, kExpertise, kRecommendation, kExecuting };

  struct Session {
    AgentId node;
    int node_type = 0;
    Phase phase = Phase::kDiscover;
    int outstanding = 0;
    std::set<AgentId> discovered;
    Plan plan;
  };

  void on_call_for_proposal(const ProtocolMessage& msg, MessageBus& bus);
  void on_plan_needed(const ProtocolMessage& msg, const PlanNeeded& req, MessageBus& bus);
  void on_reply(const ProtocolMessage& msg, MessageBus& bus);
  void on_execution_result(const ProtocolMessage& msg, const InformExecutionResult& result);

  void start_discovery(ConversationId plan_conv, Session& s, MessageBus& bus);
  void start_expertise(ConversationId plan_conv, Session& s, MessageBus& bus);
  void start_recommendation(ConversationId plan_conv, Session& s, MessageBus& bus);
  void finish_planning(ConversationId plan_conv, Session& s, MessageBus& bus);
  void query_all(ConversationId plan_conv, Session& s, const Payload& query, MessageBus& bus);

  std::vector<Candidate> build_candidates(int node_type) const;
  Plan plan_from_own_history(int node_type) const;
  bool covers(int node_type) const;

  OperatorAgentState state_;
  OperatorSettings settings_;
  std::vector<AgentId> peers_;
  int reserved_ = 0;
  std::set<ConversationId> proposals_out_;
  std::map<ConversationId, Session> sessions_;
  std::map<ConversationId, ConversationId> query_owner_;
  MergeListener merge_listener_;
};

}  // namespace planmerge
