// SPDX-License-Identifier: Apache-2.0

// Line-anchored marker grammar shared by the prompt renderer and the
// completion parser:
//
//   Thought: ...
//   Action: <tool name>
//   Action Input: <tool input>
//   Observation: ...
//   Final Answer: ...
//
// A step's text runs from its marker to the next marker line (or the end)
// and is trimmed. Markers are case-sensitive; leading whitespace before a
// marker is tolerated.

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uat::agent {

enum class StepKind { Thought, Action, Observation, FinalAnswer };

std::string_view to_string(StepKind kind);

struct ReasoningStep {
  StepKind kind = StepKind::Thought;
  std::string text;
  std::optional<std::string> tool_name;   // Action only
  std::optional<std::string> tool_input;  // Action only

  static ReasoningStep thought(std::string text);
  static ReasoningStep action(std::string tool, std::string input);
  static ReasoningStep observation(std::string text);
  static ReasoningStep final_answer(std::string text);

  bool operator==(const ReasoningStep&) const = default;
};

enum class ParseErrc { NoDirective, ActionWithoutInput };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ParseErrc code() const noexcept { return code_; }

 private:
  ParseErrc code_;
};

/// Parses one completion into at most one Thought followed by either an
/// Action or a Final Answer. Text before the first marker counts as the
/// Thought, since the prompt ends with an open "Thought:". Anything after
/// the directive, including a hallucinated Observation, is discarded.
std::vector<ReasoningStep> parse_step(std::string_view model_output);

/// Renders steps with the markers above, one marker per line.
std::string render_steps(std::span<const ReasoningStep> steps);

/// Parses a rendered scratchpad (any number of iterations, including
/// Observations) back into steps.
std::vector<ReasoningStep> parse_scratchpad(std::string_view text);

}  // namespace uat::agent
