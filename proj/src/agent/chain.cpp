// SPDX-License-Identifier: Apache-2.0

#include "uat/agent/chain.hpp"

#include <algorithm>

#include "uat/tools/registry.hpp"

namespace uat::agent {

std::string_view to_string(ExpansionKind kind) {
  switch (kind) {
    case ExpansionKind::PostFirst: return "PostFirst";
    case ExpansionKind::PreSecond: return "PreSecond";
    case ExpansionKind::None: return "None";
  }
  return "Unknown";
}

std::string_view to_string(AgentLabel label) { return label == AgentLabel::Vanilla ? "vanilla" : "enabled"; }

std::string_view to_string(ChainStatus status) {
  switch (status) {
    case ChainStatus::Running: return "Running";
    case ChainStatus::AwaitingTool: return "AwaitingTool";
    case ChainStatus::AwaitingHuman: return "AwaitingHuman";
    case ChainStatus::Finished: return "Finished";
    case ChainStatus::Aborted: return "Aborted";
  }
  return "Unknown";
}

AgentConfig AgentConfig::vanilla(std::vector<std::string> tools) {
  AgentConfig config;
  config.label = AgentLabel::Vanilla;
  config.tool_names = std::move(tools);
  config.insert_cap = 0;
  return config;
}

AgentConfig AgentConfig::enabled(std::vector<std::string> tools, std::size_t insert_cap) {
  AgentConfig config;
  config.label = AgentLabel::Enabled;
  config.tool_names = std::move(tools);
  config.insert_cap = insert_cap;
  return config;
}

void validate(const AgentConfig& config, const tools::ToolRegistry& registry) {
  if (config.max_steps == 0) throw ChainError(ChainErrc::InvalidConfig, "max_steps must be positive");
  std::size_t human = 0;
  for (const auto& name : config.tool_names) {
    if (!registry.find(name)) throw ChainError(ChainErrc::UnknownTool, "unknown tool: " + name);
    human += registry.is_human(name);
  }
  if (config.label == AgentLabel::Vanilla && (human > 0 || config.insert_cap > 0))
    throw ChainError(ChainErrc::InvalidConfig, "vanilla agents cannot use user-as-a-tool tools");
  if (config.label == AgentLabel::Enabled && human == 0)
    throw ChainError(ChainErrc::InvalidConfig, "enabled agents need at least one user-as-a-tool tool");
}

const ReasoningStep* ChainState::pending_action() const {
  if (status != ChainStatus::AwaitingTool && status != ChainStatus::AwaitingHuman) return nullptr;
  if (scratchpad.empty() || scratchpad.back().kind != StepKind::Action) return nullptr;
  return &scratchpad.back();
}

std::optional<std::string> ChainState::final_answer() const {
  if (!done() || scratchpad.empty() || scratchpad.back().kind != StepKind::FinalAnswer) return std::nullopt;
  return scratchpad.back().text;
}

ChainState start_chain(const AgentConfig& config) {
  ChainState state;
  state.max_steps = config.max_steps;
  state.insert_cap = config.insert_cap;
  return state;
}

namespace {

[[noreturn]] void illegal(std::string_view op, ChainStatus status) {
  throw ChainError(ChainErrc::IllegalTransition,
                   std::string(op) + " is not allowed in status " + std::string(to_string(status)));
}

std::string forced_answer(const std::vector<ReasoningStep>& scratchpad) {
  const auto last_thought = std::find_if(scratchpad.rbegin(), scratchpad.rend(),
                                         [](const auto& s) { return s.kind == StepKind::Thought; });
  if (last_thought == scratchpad.rend() || last_thought->text.empty())
    return std::string(kAbortPrefix) + "I ran out of reasoning steps.";
  return std::string(kAbortPrefix) + last_thought->text;
}

}  // namespace

ChainState advance(ChainState state, std::span<const ReasoningStep> parsed) {
  if (state.status != ChainStatus::Running) illegal("advance", state.status);
  if (parsed.empty()) throw ChainError(ChainErrc::InvalidSteps, "no steps to append");
  const StepKind last = parsed.back().kind;
  if (last != StepKind::Action && last != StepKind::FinalAnswer)
    throw ChainError(ChainErrc::InvalidSteps, "steps must end in an Action or Final Answer");
  for (std::size_t i = 0; i + 1 < parsed.size(); ++i)
    if (parsed[i].kind != StepKind::Thought)
      throw ChainError(ChainErrc::InvalidSteps, "only Thoughts may precede the directive");
  if (last == StepKind::Action && parsed.back().tool_name.value_or("").empty())
    throw ChainError(ChainErrc::InvalidSteps, "Action without a tool name");
  if (last == StepKind::FinalAnswer && parsed.back().text.empty())
    throw ChainError(ChainErrc::InvalidSteps, "empty Final Answer");

  state.scratchpad.insert(state.scratchpad.end(), parsed.begin(), parsed.end());
  ++state.step_count;
  if (last == StepKind::FinalAnswer) {
    state.status = ChainStatus::Finished;
  } else if (state.step_count >= state.max_steps) {
    state.scratchpad.push_back(ReasoningStep::final_answer(forced_answer(state.scratchpad)));
    state.status = ChainStatus::Aborted;
  } else {
    state.status = ChainStatus::AwaitingTool;
  }
  return state;
}

ChainState suspend_for_human(ChainState state, std::string correlation_id) {
  if (state.status != ChainStatus::AwaitingTool) illegal("suspend_for_human", state.status);
  if (state.insert_cap_reached())
    throw ChainError(ChainErrc::InsertCapReached, "insert query cap reached");
  ++state.insert_query_count;
  state.correlation_id = std::move(correlation_id);
  state.status = ChainStatus::AwaitingHuman;
  return state;
}

ChainState resume_with_observation(ChainState state, std::string observation) {
  if (state.status != ChainStatus::AwaitingTool && state.status != ChainStatus::AwaitingHuman)
    illegal("resume_with_observation", state.status);
  state.scratchpad.push_back(ReasoningStep::observation(std::move(observation)));
  state.correlation_id.reset();
  state.status = ChainStatus::Running;
  return state;
}

ChainState abort_chain(ChainState state) {
  if (state.done()) illegal("abort_chain", state.status);
  state.scratchpad.push_back(ReasoningStep::final_answer(forced_answer(state.scratchpad)));
  state.correlation_id.reset();
  state.status = ChainStatus::Aborted;
  return state;
}

ExpansionKind classify_expansion(std::string_view tool_name, const tools::ToolRegistry& registry) {
  const auto* spec = registry.find(tool_name);
  if (!spec) throw ChainError(ChainErrc::UnknownTool, "unknown tool: " + std::string(tool_name));
  return spec->expansion;
}

}  // namespace uat::agent
