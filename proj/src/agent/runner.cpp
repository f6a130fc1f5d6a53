// SPDX-License-Identifier: Apache-2.0

#include "uat/agent/runner.hpp"

#include <algorithm>

#include "uat/llm/backend.hpp"
#include "uat/tools/registry.hpp"

namespace uat::agent {

ChainRunner::ChainRunner(AgentConfig config, const tools::ToolRegistry& registry, llm::Backend& backend,
                         std::vector<HistoryMessage> history, std::string input, IdGenerator ids,
                         RunnerOptions options)
    : config_(std::move(config)),
      registry_(&registry),
      backend_(&backend),
      history_(std::move(history)),
      input_(std::move(input)),
      ids_(std::move(ids)),
      options_(std::move(options)),
      state_(start_chain(config_)) {
  validate(config_, registry);
}

TurnEffect ChainRunner::run() {
  if (state_.status != ChainStatus::Running)
    throw ChainError(ChainErrc::IllegalTransition, "run requires a Running chain");
  return drive();
}

TurnEffect ChainRunner::resume(std::string reply) {
  if (state_.status != ChainStatus::AwaitingHuman)
    throw ChainError(ChainErrc::IllegalTransition, "resume requires a chain awaiting the human");
  state_ = resume_with_observation(std::move(state_), std::move(reply));
  return drive();
}

void ChainRunner::close() {
  if (!state_.done()) state_ = abort_chain(std::move(state_));
}

namespace {

std::vector<ReasoningStep> parse_leniently(const std::string& completion) {
  try {
    return parse_step(completion);
  } catch (const ParseError& e) {
    if (e.code() == ParseErrc::ActionWithoutInput) {
      try {
        return parse_step(completion + "\nAction Input:");
      } catch (const ParseError&) {
      }
    }
  }
  const auto text = trim(completion);
  return {ReasoningStep::final_answer(text.empty() ? "..." : text)};
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

TurnEffect ChainRunner::drive() {
  while (true) {
    if (state_.status == ChainStatus::Running) {
      llm::CompletionRequest request;
      request.messages.push_back(
          {llm::Role::User, render_prompt(config_, history_, input_, state_, *registry_)});
      request.temperature = options_.temperature;
      request.max_tokens = options_.max_tokens;
      request.model_id = options_.model_id;
      request.stop = {"\nObservation:"};
      std::string completion;
      try {
        completion = backend_->complete(request);
      } catch (const llm::BackendError& e) {
        state_ = abort_chain(std::move(state_));
        return {TurnEffect::Kind::Failed, *state_.final_answer(), {}, e.what()};
      }
      const auto steps = parse_leniently(completion);
      state_ = advance(std::move(state_), steps);
      continue;
    }

    if (state_.done()) return {TurnEffect::Kind::Finished, *state_.final_answer(), {}, {}};

    if (state_.status == ChainStatus::AwaitingHuman)
      return {TurnEffect::Kind::AskHuman, state_.pending_action()->tool_input.value_or(""),
              *state_.correlation_id, {}};

    // AwaitingTool
    const ReasoningStep& action = *state_.pending_action();
    const std::string tool = action.tool_name.value_or("");
    const auto tools = available_tools(config_, state_, *registry_);
    if (std::find(tools.begin(), tools.end(), tool) == tools.end()) {
      state_ = resume_with_observation(std::move(state_),
                                       "Error: unknown tool " + tool + "; available tools: " + join(tools));
      continue;
    }
    if (registry_->is_human(tool)) {
      state_ = suspend_for_human(std::move(state_), ids_());
      continue;
    }
    std::string observation;
    try {
      observation = registry_->execute(tool, action.tool_input.value_or(""));
    } catch (const std::exception& e) {
      observation = std::string("Error: ") + e.what();
    }
    state_ = resume_with_observation(std::move(state_), std::move(observation));
  }
}

std::string ChainRunner::trace() const {
  std::string out(kChainStart);
  out += "\n";
  out += render_steps(state_.scratchpad);
  if (state_.done()) out += kChainEnd;
  return out;
}

}  // namespace uat::agent
