#include "planmerge/bus.hpp"

#include <numeric>
#include <string>

namespace planmerge {

namespace {

bool is_pure_reply(const Payload& p) {
  return std::holds_alternative<InformRecommenders>(p) ||
         std::holds_alternative<InformExpertise>(p) ||
         std::holds_alternative<InformRecommendation>(p) ||
         std::holds_alternative<InformExecutionResult>(p) ||
         std::holds_alternative<AcceptProposal>(p) || std::holds_alternative<RejectProposal>(p);
}

std::string describe(const ProtocolMessage& msg) {
  return std::string(variant_name(msg.payload)) + " " + to_string(msg.sender) + "->" +
         to_string(msg.receiver) + " conv " + std::to_string(msg.conversation_id);
}

}  // namespace

void MessageBus::send(ProtocolMessage msg) {
  auto it = pending_.find(msg.conversation_id);
  if (it != pending_.end() && answers(msg.payload, it->second.request)) {
    if (msg.sender != it->second.responder || msg.receiver != it->second.initiator) {
      throw ProtocolViolation("reply from the wrong party: " + describe(msg));
    }
    pending_.erase(it);
  } else if (is_pure_reply(msg.payload)) {
    throw ProtocolViolation("reply without an open exchange: " + describe(msg));
  }

  if (owes_reply(msg.payload)) {
    if (pending_.contains(msg.conversation_id)) {
      throw ProtocolViolation("conversation already has an open exchange: " + describe(msg));
    }
    pending_.emplace(msg.conversation_id, Expectation{msg.sender, msg.receiver, msg.payload});
  }

  ++counts_[msg.payload.index()];
  if (listener_) listener_(tick_, msg);
  queue_.push_back(std::move(msg));
}

std::optional<ProtocolMessage> MessageBus::next() {
  if (queue_.empty()) return std::nullopt;
  ProtocolMessage msg = std::move(queue_.front());
  queue_.pop_front();
  return msg;
}

std::uint64_t MessageBus::total_sent() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

}  // namespace planmerge
