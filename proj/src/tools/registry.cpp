// SPDX-License-Identifier: Apache-2.0

#include "uat/tools/registry.hpp"

#include <algorithm>

namespace uat::tools {

std::string_view to_string(ToolKind kind) {
  switch (kind) {
    case ToolKind::Computation: return "Computation";
    case ToolKind::ExternalLookup: return "ExternalLookup";
    case ToolKind::Retrieval: return "Retrieval";
    case ToolKind::Human: return "Human";
  }
  return "Unknown";
}

bool is_user_as_a_tool(std::string_view name) {
  return name == kClarifyIntent || name == kScopeResponse || name == kEnhanceAppeal;
}

ToolSpec human_tool_spec(std::string_view name) {
  using agent::ExpansionKind;
  if (name == kClarifyIntent)
    return {std::string(name), std::string(kClarifyIntentDescription), ToolKind::Human, ExpansionKind::PostFirst};
  if (name == kScopeResponse)
    return {std::string(name), std::string(kScopeResponseDescription), ToolKind::Human, ExpansionKind::PreSecond};
  if (name == kEnhanceAppeal)
    return {std::string(name), std::string(kEnhanceAppealDescription), ToolKind::Human, ExpansionKind::PreSecond};
  throw ToolError(ToolErrc::UnknownTool, "not a user-as-a-tool tool: " + std::string(name));
}

void ToolRegistry::add(ToolSpec spec, ToolExecutor executor) {
  if (spec.name.empty()) throw ToolError(ToolErrc::InvalidSpec, "tool name is empty");
  if (find(spec.name)) throw ToolError(ToolErrc::DuplicateName, "duplicate tool name: " + spec.name);
  const bool human = spec.kind == ToolKind::Human;
  if (human != (spec.expansion != agent::ExpansionKind::None))
    throw ToolError(ToolErrc::InvalidSpec, "human tools and only human tools carry an expansion kind");
  if (is_user_as_a_tool(spec.name)) {
    const auto canonical = human_tool_spec(spec.name);
    if (spec.description != canonical.description || spec.expansion != canonical.expansion || !human)
      throw ToolError(ToolErrc::InvalidSpec, "user-as-a-tool spec must match its canonical definition");
  }
  if (!human && !executor) throw ToolError(ToolErrc::InvalidSpec, "tool " + spec.name + " needs an executor");
  entries_.push_back({std::move(spec), std::move(executor)});
}

const ToolSpec* ToolRegistry::find(std::string_view name) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.spec.name == name; });
  return it == entries_.end() ? nullptr : &it->spec;
}

const ToolSpec& ToolRegistry::at(std::string_view name) const {
  if (const auto* spec = find(name)) return *spec;
  throw ToolError(ToolErrc::UnknownTool, "unknown tool: " + std::string(name));
}

bool ToolRegistry::is_human(std::string_view name) const {
  const auto* spec = find(name);
  return spec && spec->kind == ToolKind::Human;
}

std::string ToolRegistry::execute(std::string_view name, std::string_view input) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.spec.name == name; });
  if (it == entries_.end()) throw ToolError(ToolErrc::UnknownTool, "unknown tool: " + std::string(name));
  if (!it->executor) throw ToolError(ToolErrc::NotExecutable, "tool " + it->spec.name + " is answered by the human");
  try {
    return it->executor(input);
  } catch (const ToolError&) {
    throw;
  } catch (const std::exception& e) {
    throw ToolError(ToolErrc::ExecutionFailed, e.what());
  }
}

std::vector<std::string> ToolRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.spec.name);
  return out;
}

}  // namespace uat::tools
