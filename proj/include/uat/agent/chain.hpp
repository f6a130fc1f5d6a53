// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uat/agent/reasoning.hpp"

namespace uat::tools {
class ToolRegistry;
}

namespace uat::agent {

// Sequence-organization role of a tool that talks to the human.
enum class ExpansionKind { PostFirst, PreSecond, None };

std::string_view to_string(ExpansionKind kind);

enum class AgentLabel { Vanilla, Enabled };

std::string_view to_string(AgentLabel label);

inline constexpr std::size_t kDefaultMaxSteps = 8;
inline constexpr std::size_t kDefaultInsertCap = 2;
inline constexpr std::string_view kDefaultTemplateId = "react-chat-v1";
inline constexpr std::string_view kAbortPrefix = "I could not complete my reasoning: ";

struct AgentConfig {
  AgentLabel label = AgentLabel::Vanilla;
  std::vector<std::string> tool_names;
  std::size_t max_steps = kDefaultMaxSteps;
  std::size_t insert_cap = 0;
  std::string prompt_template_id{kDefaultTemplateId};

  static AgentConfig vanilla(std::vector<std::string> tools);
  static AgentConfig enabled(std::vector<std::string> tools, std::size_t insert_cap = kDefaultInsertCap);

  bool operator==(const AgentConfig&) const = default;
};

enum class ChainErrc { IllegalTransition, UnknownTool, InvalidConfig, InsertCapReached, InvalidSteps };

class ChainError : public std::runtime_error {
 public:
  ChainError(ChainErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ChainErrc code() const noexcept { return code_; }

 private:
  ChainErrc code_;
};

/// Checks tool resolution and the vanilla/enabled purity rule.
void validate(const AgentConfig& config, const tools::ToolRegistry& registry);

enum class ChainStatus { Running, AwaitingTool, AwaitingHuman, Finished, Aborted };

std::string_view to_string(ChainStatus status);

struct ChainState {
  std::vector<ReasoningStep> scratchpad;
  ChainStatus status = ChainStatus::Running;
  std::optional<std::string> correlation_id;  // set while AwaitingHuman
  std::size_t step_count = 0;
  std::size_t insert_query_count = 0;
  std::size_t max_steps = kDefaultMaxSteps;
  std::size_t insert_cap = 0;

  /// The trailing Action while a tool result is outstanding.
  const ReasoningStep* pending_action() const;
  std::optional<std::string> final_answer() const;
  bool done() const { return status == ChainStatus::Finished || status == ChainStatus::Aborted; }
  bool insert_cap_reached() const { return insert_query_count >= insert_cap; }

  bool operator==(const ChainState&) const = default;
};

ChainState start_chain(const AgentConfig& config);

/// Running -> AwaitingTool on an Action, Finished on a Final Answer. When
/// the step budget runs out without a Final Answer the chain is Aborted
/// with a forced answer built from the last Thought.
ChainState advance(ChainState state, std::span<const ReasoningStep> parsed);

/// AwaitingTool -> AwaitingHuman for a user-as-a-tool call. Counts the
/// insert query.
ChainState suspend_for_human(ChainState state, std::string correlation_id);

/// AwaitingTool | AwaitingHuman -> Running with the observation appended.
ChainState resume_with_observation(ChainState state, std::string observation);

/// Running | AwaitingTool | AwaitingHuman -> Aborted with a forced answer.
ChainState abort_chain(ChainState state);

ExpansionKind classify_expansion(std::string_view tool_name, const tools::ToolRegistry& registry);

}  // namespace uat::agent
