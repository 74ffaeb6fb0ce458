#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <variant>

#include "planmerge/messages.hpp"

namespace planmerge {

using Tick = std::int64_t;

/// In-process FIFO delivery with conversation bookkeeping.
///
/// Every message that owes a reply (see owes_reply) registers an expectation
/// keyed by its conversation id; the answer must come from the addressee,
/// go back to the initiator, and arrive exactly once. Violations throw
/// ProtocolViolation at send time; unanswered exchanges are reported by
/// open_exchanges().
class MessageBus {
 public:
  using Listener = std::function<void(Tick, const ProtocolMessage&)>;

  ConversationId open_conversation() { return next_conversation_++; }

  void send(ProtocolMessage msg);

  std::optional<ProtocolMessage> next();
  bool empty() const { return queue_.empty(); }

  void set_tick(Tick tick) { tick_ = tick; }
  Tick tick() const { return tick_; }

  void set_listener(Listener listener) { listener_ = std::move(listener); }

  std::size_t open_exchanges() const { return pending_.size(); }
  std::uint64_t sent(std::size_t variant_index) const { return counts_.at(variant_index); }
  template <class T>
  std::uint64_t sent() const {
    return counts_.at(Payload(std::in_place_type<T>).index());
  }
  std::uint64_t total_sent() const;

 private:
  struct Expectation {
    AgentId initiator;
    AgentId responder;
    Payload request;
  };

  std::deque<ProtocolMessage> queue_;
  std::map<ConversationId, Expectation> pending_;
  std::array<std::uint64_t, std::variant_size_v<Payload>> counts_{};
  ConversationId next_conversation_ = 1;
  Tick tick_ = 0;
  Listener listener_;
};

}  // namespace planmerge
