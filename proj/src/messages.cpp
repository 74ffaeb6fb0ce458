#include "planmerge/messages.hpp"

namespace planmerge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view variant_name(const Payload& payload) {
  return std::visit(
      overloaded{
          [](const CallForProposal&) { return std::string_view("CallForProposal"); },
          [](const OperatorProposal&) { return std::string_view("OperatorProposal"); },
          [](const AcceptProposal&) { return std::string_view("AcceptProposal"); },
          [](const RejectProposal&) { return std::string_view("RejectProposal"); },
          [](const PlanNeeded&) { return std::string_view("PlanNeeded"); },
          [](const QueryRecommenders&) { return std::string_view("QueryRecommenders"); },
          [](const InformRecommenders&) { return std::string_view("InformRecommenders"); },
          [](const QueryExpertise&) { return std::string_view("QueryExpertise"); },
          [](const InformExpertise&) { return std::string_view("InformExpertise"); },
          [](const QueryRecommendation&) { return std::string_view("QueryRecommendation"); },
          [](const InformRecommendation&) { return std::string_view("InformRecommendation"); },
          [](const RequestExecution&) { return std::string_view("RequestExecution"); },
          [](const InformExecutionResult&) { return std::string_view("InformExecutionResult"); },
      },
      payload);
}

bool owes_reply(const Payload& payload) {
  return std::holds_alternative<OperatorProposal>(payload) ||
         std::holds_alternative<PlanNeeded>(payload) ||
         std::holds_alternative<QueryRecommenders>(payload) ||
         std::holds_alternative<QueryExpertise>(payload) ||
         std::holds_alternative<QueryRecommendation>(payload) ||
         std::holds_alternative<RequestExecution>(payload);
}

bool answers(const Payload& reply, const Payload& request) {
  if (std::holds_alternative<OperatorProposal>(request)) {
    return std::holds_alternative<AcceptProposal>(reply) ||
           std::holds_alternative<RejectProposal>(reply);
  }
  if (std::holds_alternative<PlanNeeded>(request)) {
    return std::holds_alternative<RequestExecution>(reply);
  }
  if (std::holds_alternative<QueryRecommenders>(request)) {
    return std::holds_alternative<InformRecommenders>(reply);
  }
  if (std::holds_alternative<QueryExpertise>(request)) {
    return std::holds_alternative<InformExpertise>(reply);
  }
  if (std::holds_alternative<QueryRecommendation>(request)) {
    return std::holds_alternative<InformRecommendation>(reply);
  }
  if (std::holds_alternative<RequestExecution>(request)) {
    return std::holds_alternative<InformExecutionResult>(reply);
  }
  return false;
}

}  // namespace planmerge
