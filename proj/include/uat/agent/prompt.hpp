// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uat/agent/chain.hpp"

namespace uat::agent {

struct HistoryMessage {
  enum class Role { Human, Assistant };
  Role role = Role::Human;
  std::string text;

  bool operator==(const HistoryMessage&) const = default;
};

/// Raw text of a pinned prompt template; throws ChainError(InvalidConfig)
/// for unknown ids.
std::string_view prompt_template(std::string_view template_id);

/// Tools the model may call in this state: the config's tools, minus the
/// user-as-a-tool tools once the insert cap is reached.
std::vector<std::string> available_tools(const AgentConfig& config, const ChainState& state,
                                         const tools::ToolRegistry& registry);

/// Fills the template with the tool list (name and description verbatim),
/// the conversation history, the current input and the scratchpad.
std::string render_prompt(const AgentConfig& config, std::span<const HistoryMessage> history,
                          std::string_view input, const ChainState& state,
                          const tools::ToolRegistry& registry);

}  // namespace uat::agent
