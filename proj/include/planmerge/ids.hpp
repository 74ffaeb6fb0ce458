#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace planmerge {

enum class Role : std::uint8_t { kOperator = 0, kNode = 1 };

/// Agent identifier. Operators sort before nodes; within a role by index.
struct AgentId {
  Role role = Role::kOperator;
  int index = 0;

  static constexpr AgentId op(int i) { return AgentId{Role::kOperator, i}; }
  static constexpr AgentId node(int i) { return AgentId{Role::kNode, i}; }

  friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

inline std::string to_string(const AgentId& id) {
  return (id.role == Role::kOperator ? "op" : "node") + std::to_string(id.index);
}

using ConversationId = std::uint64_t;

}  // namespace planmerge
