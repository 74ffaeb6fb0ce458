#include "planmerge/agents.hpp"

#include <algorithm>
#include <string>

namespace planmerge {

// ---------------------------------------------------------------------------
// NodeAgent

NodeAgent::NodeAgent(NodeAgentState state, Plan optimal_plan, EvaluationContext context, Rng rng,
                     std::vector<AgentId> operator_roster)
    : state_(std::move(state)),
      optimal_plan_(std::move(optimal_plan)),
      context_(std::move(context)),
      rng_(std::move(rng)),
      roster_(std::move(operator_roster)) {
  validate_plan(optimal_plan_, context_.dims);
  if (state_.time_until_next_plan < 0) throw InvalidInput("time_until_next_plan must be >= 0");
}

void NodeAgent::seek_operator(MessageBus& bus) {
  if (state_.current_operator || call_open()) return;
  for (const AgentId& op : roster_) {
    const ConversationId conv = bus.open_conversation();
    open_calls_.insert(conv);
    bus.send({id(), op, conv, CallForProposal{state_.node_type, state_.node_subtype}});
  }
}

void NodeAgent::close_call_for_proposals(MessageBus& bus) {
  if (!call_open()) return;
  open_calls_.clear();
  if (proposals_.empty()) return;

  const auto chosen = static_cast<std::size_t>(rng_.uniform_index(proposals_.size()));
  for (std::size_t i = 0; i < proposals_.size(); ++i) {
    const auto& p = proposals_[i];
    if (i == chosen) {
      bus.send({id(), p.from, p.conversation, AcceptProposal{}});
    } else {
      bus.send({id(), p.from, p.conversation, RejectProposal{}});
    }
  }
  state_.current_operator = proposals_[chosen].from;
  proposals_.clear();
}

bool NodeAgent::signal_plan_needed(MessageBus& bus) {
  if (!state_.current_operator || pending_plan_ || finished()) return false;
  if (state_.time_until_next_plan > 0) return false;
  const ConversationId conv = bus.open_conversation();
  pending_plan_ = conv;
  bus.send({id(), *state_.current_operator, conv,
            PlanNeeded{state_.node_id, state_.node_type, state_.node_subtype}});
  return true;
}

void NodeAgent::advance_clock() {
  if (pending_plan_) return;
  state_.time_until_next_plan = std::max(0.0, state_.time_until_next_plan - 1.0);
}

InformExecutionResult NodeAgent::evaluate_execution(const RequestExecution& request) {
  if (!is_valid(request.plan, context_.dims)) {
    throw ProtocolViolation("node" + std::to_string(state_.node_id) +
                            " refuses a malformed plan: " + to_string(request.plan));
  }
  const double raw = plan_error(request.plan, optimal_plan_, context_.weights, context_.dims);
  const double norm = raw / (context_.dims.num_timesteps * context_.weights.total());
  const ExecutionOutcome outcome =
      evaluate_outcome(norm, request.expertise, context_.rep_params, rng_, context_.zero_noise);

  state_.time_until_next_plan = outcome.next_time;

  if (sink_) {
    ExecutionReport report;
    report.node_id = state_.node_id;
    report.operator_id = state_.current_operator ? state_.current_operator->index : -1;
    report.round = rounds_completed_ + 1;
    report.raw_error = raw;
    report.normalized_error = norm;
    report.improvement = 1.0 - norm;
    report.perceived_result = outcome.perceived_result;
    report.next_time = outcome.next_time;
    sink_(report);
  }
  ++rounds_completed_;
  return InformExecutionResult{outcome.perceived_result, outcome.next_time, outcome.noise_stddev};
}

void NodeAgent::handle(const ProtocolMessage& msg, MessageBus& bus) {
  if (const auto* p = std::get_if<OperatorProposal>(&msg.payload)) {
    (void)p;
    if (!open_calls_.contains(msg.conversation_id)) {
      throw ProtocolViolation("proposal for a call that is not open: " + to_string(msg.sender));
    }
    proposals_.push_back({msg.sender, msg.conversation_id});
    return;
  }
  if (const auto* req = std::get_if<RequestExecution>(&msg.payload)) {
    if (!state_.current_operator || msg.sender != *state_.current_operator) {
      throw ProtocolViolation("execution requested by " + to_string(msg.sender) +
                              ", which does not operate node" + std::to_string(state_.node_id));
    }
    if (!pending_plan_ || *pending_plan_ != msg.conversation_id) {
      throw ProtocolViolation("execution request outside a plan conversation");
    }
    InformExecutionResult result = evaluate_execution(*req);
    pending_plan_.reset();
    bus.send({id(), msg.sender, msg.conversation_id, result});
    return;
  }
  throw ProtocolViolation("node cannot handle " + std::string(variant_name(msg.payload)));
}

// ---------------------------------------------------------------------------
// OperatorAgent

OperatorAgent::OperatorAgent(int operator_id, int availability, int specialty_type,
                             OperatorSettings settings, std::vector<AgentId> peers)
    : settings_(settings), peers_(std::move(peers)) {
  if (availability < 1) throw InvalidInput("availability must be >= 1");
  state_.operator_id = operator_id;
  state_.availability = availability;
  state_.specialty_type = specialty_type;
  std::erase(peers_, id());
  std::sort(peers_.begin(), peers_.end());
}

void OperatorAgent::seed_history(int node_type, HistoryEntry entry, ExpertiseRecord expertise) {
  auto& history = state_.plan_history_by_type[node_type];
  history.push_back(std::move(entry));
  while (static_cast<int>(history.size()) > settings_.history_depth) history.pop_front();
  state_.expertise_by_type[node_type] = expertise;
}

bool OperatorAgent::covers(int node_type) const {
  if (state_.specialty_type == node_type) return true;
  auto it = state_.plan_history_by_type.find(node_type);
  return it != state_.plan_history_by_type.end() && !it->second.empty();
}

void OperatorAgent::handle(const ProtocolMessage& msg, MessageBus& bus) {
  const Payload& p = msg.payload;
  if (std::holds_alternative<CallForProposal>(p)) {
    on_call_for_proposal(msg, bus);
  } else if (std::holds_alternative<AcceptProposal>(p) || std::holds_alternative<RejectProposal>(p)) {
    if (proposals_out_.erase(msg.conversation_id) == 0) {
      throw ProtocolViolation("decision for an unknown proposal from " + to_string(msg.sender));
    }
    --reserved_;
    if (std::holds_alternative<AcceptProposal>(p)) {
      state_.operated_nodes.insert(msg.sender.index);
      if (static_cast<int>(state_.operated_nodes.size()) > state_.availability) {
        throw ProtocolViolation(to_string(id()) + " exceeds its availability");
      }
    }
  } else if (const auto* req = std::get_if<PlanNeeded>(&p)) {
    on_plan_needed(msg, *req, bus);
  } else if (const auto* q = std::get_if<QueryRecommenders>(&p)) {
    InformRecommenders reply;
    if (covers(q->node_type)) reply.recommenders.push_back(id());
    bus.send({id(), msg.sender, msg.conversation_id, std::move(reply)});
  } else if (const auto* q = std::get_if<QueryExpertise>(&p)) {
    auto it = state_.expertise_by_type.find(q->node_type);
    // An operator that never worked on the type reports the prior record.
    const ExpertiseRecord record =
        it != state_.expertise_by_type.end() ? it->second : ExpertiseRecord{};
    bus.send({id(), msg.sender, msg.conversation_id, InformExpertise{q->node_type, record}});
  } else if (const auto* q = std::get_if<QueryRecommendation>(&p)) {
    InformRecommendation reply{q->node_type, std::nullopt};
    auto it = state_.plan_history_by_type.find(q->node_type);
    if (it != state_.plan_history_by_type.end() && !it->second.empty()) {
      reply.plan = it->second.back().plan;
    }
    bus.send({id(), msg.sender, msg.conversation_id, std::move(reply)});
  } else if (std::holds_alternative<InformRecommenders>(p) ||
             std::holds_alternative<InformExpertise>(p) ||
             std::holds_alternative<InformRecommendation>(p)) {
    on_reply(msg, bus);
  } else if (const auto* r = std::get_if<InformExecutionResult>(&p)) {
    on_execution_result(msg, *r);
  } else {
    throw ProtocolViolation("operator cannot handle " + std::string(variant_name(p)));
  }
}

void OperatorAgent::on_call_for_proposal(const ProtocolMessage& msg, MessageBus& bus) {
  const int spare =
      state_.availability - static_cast<int>(state_.operated_nodes.size()) - reserved_;
  if (spare <= 0) return;
  ++reserved_;
  proposals_out_.insert(msg.conversation_id);
  bus.send({id(), msg.sender, msg.conversation_id, OperatorProposal{spare}});
}

void OperatorAgent::on_plan_needed(const ProtocolMessage& msg, const PlanNeeded& req,
                                   MessageBus& bus) {
  if (!state_.operated_nodes.contains(msg.sender.index) || msg.sender.role != Role::kNode) {
    throw ProtocolViolation(to_string(id()) + " got PlanNeeded from unoperated " +
                            to_string(msg.sender));
  }
  Session& s = sessions_[msg.conversation_id];
  s.node = msg.sender;
  s.node_type = req.node_type;

  if (settings_.method == MergeMethod::kOwnHistory) {
    finish_planning(msg.conversation_id, s, bus);
  } else if (state_.recommender_directory[req.node_type].empty()) {
    start_discovery(msg.conversation_id, s, bus);
  } else {
    start_expertise(msg.conversation_id, s, bus);
  }
}

void OperatorAgent::query_all(ConversationId plan_conv, Session& s, const Payload& query,
                              MessageBus& bus) {
  const auto send_to = [&](AgentId target) {
    const ConversationId conv = bus.open_conversation();
    query_owner_[conv] = plan_conv;
    ++s.outstanding;
    bus.send({id(), target, conv, query});
  };
  if (s.phase == Phase::kDiscover) {
    for (const AgentId& peer : peers_) send_to(peer);
  } else {
    for (const auto& entry : state_.recommender_directory[s.node_type]) send_to(entry.id);
  }
}

void OperatorAgent::start_discovery(ConversationId plan_conv, Session& s, MessageBus& bus) {
  s.phase = Phase::kDiscover;
  s.discovered.clear();
  query_all(plan_conv, s, QueryRecommenders{s.node_type}, bus);
  if (s.outstanding == 0) finish_planning(plan_conv, s, bus);
}

void OperatorAgent::start_expertise(ConversationId plan_conv, Session& s, MessageBus& bus) {
  s.phase = Phase::kExpertise;
  query_all(plan_conv, s, QueryExpertise{s.node_type}, bus);
  if (s.outstanding == 0) finish_planning(plan_conv, s, bus);
}

void OperatorAgent::start_recommendation(ConversationId plan_conv, Session& s, MessageBus& bus) {
  s.phase = Phase::kRecommendation;
  query_all(plan_conv, s, QueryRecommendation{s.node_type}, bus);
  if (s.outstanding == 0) finish_planning(plan_conv, s, bus);
}

void OperatorAgent::on_reply(const ProtocolMessage& msg, MessageBus& bus) {
  auto owner = query_owner_.find(msg.conversation_id);
  if (owner == query_owner_.end()) {
    throw ProtocolViolation("reply to an unknown query from " + to_string(msg.sender));
  }
  const ConversationId plan_conv = owner->second;
  query_owner_.erase(owner);
  Session& s = sessions_.at(plan_conv);
  auto& directory = state_.recommender_directory[s.node_type];
  const auto entry = std::find_if(directory.begin(), directory.end(),
                                  [&](const RecommenderEntry& e) { return e.id == msg.sender; });

  if (const auto* r = std::get_if<InformRecommenders>(&msg.payload)) {
    s.discovered.insert(r->recommenders.begin(), r->recommenders.end());
  } else if (const auto* r = std::get_if<InformExpertise>(&msg.payload)) {
    if (entry != directory.end()) entry->expertise = r->expertise;
  } else if (const auto* r = std::get_if<InformRecommendation>(&msg.payload)) {
    if (entry != directory.end()) entry->last_recommendation = r->plan;
  }

  if (--s.outstanding > 0) return;

  switch (s.phase) {
    case Phase::kDiscover: {
      directory.clear();
      for (const AgentId& found : s.discovered) {
        if (found == id()) continue;
        if (static_cast<int>(directory.size()) >= settings_.max_recommenders) break;
        directory.push_back(RecommenderEntry{found, std::nullopt, std::nullopt});
      }
      if (directory.empty()) {
        finish_planning(plan_conv, s, bus);
      } else {
        start_expertise(plan_conv, s, bus);
      }
      break;
    }
    case Phase::kExpertise:
      start_recommendation(plan_conv, s, bus);
      break;
    case Phase::kRecommendation:
      finish_planning(plan_conv, s, bus);
      break;
    case Phase::kExecuting:
      throw ProtocolViolation("query reply after planning finished");
  }
}

Plan OperatorAgent::plan_from_own_history(int node_type) const {
  auto it = state_.plan_history_by_type.find(node_type);
  if (it == state_.plan_history_by_type.end() || it->second.empty()) {
    throw NoCandidate(to_string(id()) + " has no plan history for type " +
                      std::to_string(node_type));
  }
  const std::vector<HistoryEntry> history(it->second.begin(), it->second.end());
  return merge_method0(history);
}

std::vector<Candidate> OperatorAgent::build_candidates(int node_type) const {
  std::vector<Candidate> candidates;
  auto dir = state_.recommender_directory.find(node_type);
  if (dir != state_.recommender_directory.end()) {
    for (const auto& entry : dir->second) {
      if (!entry.last_recommendation || !entry.expertise) continue;
      candidates.push_back(Candidate{entry.id, *entry.last_recommendation,
                                     reputation(*entry.expertise, settings_.rep_params), false});
    }
  }
  if (candidates.empty()) return candidates;

  if (settings_.include_own_plan) {
    auto hist = state_.plan_history_by_type.find(node_type);
    if (hist != state_.plan_history_by_type.end() && !hist->second.empty()) {
      auto exp = state_.expertise_by_type.find(node_type);
      const ExpertiseRecord own =
          exp != state_.expertise_by_type.end() ? exp->second : ExpertiseRecord{};
      candidates.push_back(
          Candidate{id(), hist->second.back().plan, reputation(own, settings_.rep_params), true});
    }
  }
  return candidates;
}

void OperatorAgent::finish_planning(ConversationId plan_conv, Session& s, MessageBus& bus) {
  Plan merged;
  if (settings_.method == MergeMethod::kOwnHistory) {
    merged = plan_from_own_history(s.node_type);
  } else {
    const std::vector<Candidate> candidates = build_candidates(s.node_type);
    if (candidates.empty()) {
      merged = plan_from_own_history(s.node_type);
    } else {
      switch (settings_.method) {
        case MergeMethod::kBestPlan:
          merged = merge_method1(candidates);
          break;
        case MergeMethod::kStepVote:
          merged = merge_method2(candidates);
          break;
        case MergeMethod::kBestWithVote:
          merged = candidates.size() >= 2
                       ? merge_method3(candidates, settings_.num_replacements)
                       : merge_method1(candidates);
          break;
        case MergeMethod::kOwnHistory:
          break;
      }
      if (merge_listener_) merge_listener_(id(), s.node, candidates, merged);
    }
  }

  s.phase = Phase::kExecuting;
  s.plan = merged;
  const ExpertiseRecord current = state_.expertise_by_type.contains(s.node_type)
                                      ? state_.expertise_by_type.at(s.node_type)
                                      : ExpertiseRecord{};
  bus.send({id(), s.node, plan_conv,
            RequestExecution{std::move(merged), in_progress(current, settings_.rep_params)}});
}

void OperatorAgent::on_execution_result(const ProtocolMessage& msg,
                                        const InformExecutionResult& result) {
  auto it = sessions_.find(msg.conversation_id);
  if (it == sessions_.end() || it->second.phase != Phase::kExecuting) {
    throw ProtocolViolation("execution result for an unknown plan from " + to_string(msg.sender));
  }
  Session& s = it->second;
  const ExpertiseRecord old = state_.expertise_by_type.contains(s.node_type)
                                  ? state_.expertise_by_type.at(s.node_type)
                                  : ExpertiseRecord{};
  state_.expertise_by_type[s.node_type] =
      update_expertise(old, result.noise_stddev, settings_.rep_params);

  auto& history = state_.plan_history_by_type[s.node_type];
  history.push_back(HistoryEntry{std::move(s.plan), 1.0 - result.perceived_result});
  while (static_cast<int>(history.size()) > settings_.history_depth) history.pop_front();

  sessions_.erase(it);
}

}  // namespace planmerge
