// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uat/agent/chain.hpp"

namespace uat::tools {

enum class ToolKind { Computation, ExternalLookup, Retrieval, Human };

std::string_view to_string(ToolKind kind);

struct ToolSpec {
  std::string name;
  std::string description;
  ToolKind kind = ToolKind::Computation;
  agent::ExpansionKind expansion = agent::ExpansionKind::None;
};

// Executors map the Action Input to an Observation. Failures are thrown
// as ToolError and reported back to the model.
using ToolExecutor = std::function<std::string(std::string_view input)>;

enum class ToolErrc { DuplicateName, UnknownTool, InvalidSpec, ExecutionFailed, NotExecutable };

class ToolError : public std::runtime_error {
 public:
  ToolError(ToolErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ToolErrc code() const noexcept { return code_; }

 private:
  ToolErrc code_;
};

// User-as-a-tool tools. Their descriptions are the model-facing prompts.
inline constexpr std::string_view kClarifyIntent = "clarify_intent";
inline constexpr std::string_view kScopeResponse = "scope_response";
inline constexpr std::string_view kEnhanceAppeal = "enhance_appeal";

inline constexpr std::string_view kClarifyIntentDescription =
    "useful if you do not understand what the appropriate type of response would be";
inline constexpr std::string_view kScopeResponseDescription =
    "useful if you need more information on the human to tailor your answer to their needs";
inline constexpr std::string_view kEnhanceAppealDescription =
    "useful if you want to make your forthcoming response more appealing";

inline constexpr std::string_view kCalculator = "Calculator";
inline constexpr std::string_view kWikipedia = "Wikipedia";
inline constexpr std::string_view kReportRetrieval = "UN info";

bool is_user_as_a_tool(std::string_view name);

/// Spec of one of the three user-as-a-tool tools; throws UnknownTool otherwise.
ToolSpec human_tool_spec(std::string_view name);

/// Name-unique collection of tools. Human tools carry no executor: the
/// session routes them to the participant.
class ToolRegistry {
 public:
  void add(ToolSpec spec, ToolExecutor executor = {});

  const ToolSpec* find(std::string_view name) const;
  const ToolSpec& at(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  bool is_human(std::string_view name) const;

  std::string execute(std::string_view name, std::string_view input) const;

  /// Names in insertion order.
  std::vector<std::string> names() const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    ToolSpec spec;
    ToolExecutor executor;
  };
  std::vector<Entry> entries_;
};

}  // namespace uat::tools
