// SPDX-License-Identifier: Apache-2.0

#include "uat/agent/reasoning.hpp"

#include <array>

#include "uat/common.hpp"

namespace uat::agent {

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Thought: return "Thought";
    case StepKind::Action: return "Action";
    case StepKind::Observation: return "Observation";
    case StepKind::FinalAnswer: return "Final Answer";
  }
  return "Unknown";
}

ReasoningStep ReasoningStep::thought(std::string text) { return {StepKind::Thought, std::move(text), {}, {}}; }

ReasoningStep ReasoningStep::action(std::string tool, std::string input) {
  return {StepKind::Action, {}, std::move(tool), std::move(input)};
}

ReasoningStep ReasoningStep::observation(std::string text) {
  return {StepKind::Observation, std::move(text), {}, {}};
}

ReasoningStep ReasoningStep::final_answer(std::string text) {
  return {StepKind::FinalAnswer, std::move(text), {}, {}};
}

namespace {

enum class Marker { Preamble, Thought, Action, ActionInput, Observation, FinalAnswer };

struct Segment {
  Marker marker;
  std::string text;
};

// "Action Input:" must be tested before its prefix "Action:".
constexpr std::array<std::pair<std::string_view, Marker>, 5> kMarkers = {{
    {"Thought:", Marker::Thought},
    {"Action Input:", Marker::ActionInput},
    {"Action:", Marker::Action},
    {"Observation:", Marker::Observation},
    {"Final Answer:", Marker::FinalAnswer},
}};

std::vector<Segment> split_segments(std::string_view text) {
  std::vector<Segment> segments;
  std::string current;
  Marker marker = Marker::Preamble;
  auto flush = [&] {
    if (marker != Marker::Preamble || !trim(current).empty()) segments.push_back({marker, trim(current)});
    current.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t indent = line.find_first_not_of(" \t");
    const std::string_view body = indent == std::string_view::npos ? std::string_view{} : line.substr(indent);
    bool matched = false;
    for (const auto& [literal, kind] : kMarkers) {
      if (body.starts_with(literal)) {
        flush();
        marker = kind;
        current.assign(body.substr(literal.size()));
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (!current.empty() || marker != Marker::Preamble) current.push_back('\n');
      current.append(line);
    }
    pos = end + 1;
  }
  flush();
  return segments;
}

}  // namespace

std::vector<ReasoningStep> parse_step(std::string_view model_output) {
  const auto segments = split_segments(model_output);
  std::string thought;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    switch (seg.marker) {
      case Marker::Preamble:
      case Marker::Thought:
        if (!seg.text.empty()) thought += (thought.empty() ? "" : "\n") + seg.text;
        break;
      case Marker::ActionInput:
        break;  // stray input without an Action
      case Marker::Observation:
        throw ParseError(ParseErrc::NoDirective, "observation before any directive");
      case Marker::Action: {
        if (seg.text.empty()) throw ParseError(ParseErrc::NoDirective, "empty tool name");
        if (i + 1 >= segments.size() || segments[i + 1].marker != Marker::ActionInput)
          throw ParseError(ParseErrc::ActionWithoutInput, "Action without Action Input");
        std::vector<ReasoningStep> steps;
        if (!thought.empty()) steps.push_back(ReasoningStep::thought(thought));
        steps.push_back(ReasoningStep::action(seg.text, segments[i + 1].text));
        return steps;
      }
      case Marker::FinalAnswer: {
        if (seg.text.empty()) throw ParseError(ParseErrc::NoDirective, "empty final answer");
        std::vector<ReasoningStep> steps;
        if (!thought.empty()) steps.push_back(ReasoningStep::thought(thought));
        steps.push_back(ReasoningStep::final_answer(seg.text));
        return steps;
      }
    }
  }
  throw ParseError(ParseErrc::NoDirective, "neither Action nor Final Answer present");
}

std::string render_steps(std::span<const ReasoningStep> steps) {
  std::string out;
  for (const auto& step : steps) {
    switch (step.kind) {
      case StepKind::Thought: out += "Thought: " + step.text + "\n"; break;
      case StepKind::Action:
        out += "Action: " + step.tool_name.value_or("") + "\n";
        out += "Action Input: " + step.tool_input.value_or("") + "\n";
        break;
      case StepKind::Observation: out += "Observation: " + step.text + "\n"; break;
      case StepKind::FinalAnswer: out += "Final Answer: " + step.text + "\n"; break;
    }
  }
  return out;
}

std::vector<ReasoningStep> parse_scratchpad(std::string_view text) {
  const auto segments = split_segments(text);
  std::vector<ReasoningStep> steps;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    switch (seg.marker) {
      case Marker::Preamble:
      case Marker::Thought: steps.push_back(ReasoningStep::thought(seg.text)); break;
      case Marker::Observation: steps.push_back(ReasoningStep::observation(seg.text)); break;
      case Marker::FinalAnswer: steps.push_back(ReasoningStep::final_answer(seg.text)); break;
      case Marker::ActionInput: throw ParseError(ParseErrc::NoDirective, "Action Input without Action");
      case Marker::Action:
        if (i + 1 >= segments.size() || segments[i + 1].marker != Marker::ActionInput)
          throw ParseError(ParseErrc::ActionWithoutInput, "Action without Action Input");
        steps.push_back(ReasoningStep::action(seg.text, segments[i + 1].text));
        ++i;
        break;
    }
  }
  return steps;
}

}  // namespace uat::agent
