// SPDX-License-Identifier: Apache-2.0

#include "uat/agent/prompt.hpp"

#include "uat/agent/prompt_assets.hpp"
#include "uat/tools/registry.hpp"

namespace uat::agent {

std::string_view prompt_template(std::string_view template_id) {
  if (template_id == "react-chat-v1") return assets::kReactChatV1;
  throw ChainError(ChainErrc::InvalidConfig, "unknown prompt template: " + std::string(template_id));
}

std::vector<std::string> available_tools(const AgentConfig& config, const ChainState& state,
                                         const tools::ToolRegistry& registry) {
  std::vector<std::string> out;
  for (const auto& name : config.tool_names) {
    if (!registry.find(name)) throw ChainError(ChainErrc::UnknownTool, "unknown tool: " + name);
    if (registry.is_human(name) && state.insert_cap_reached()) continue;
    out.push_back(name);
  }
  return out;
}

namespace {

// Single pass over the template, so substituted text is never rescanned.
std::string expand(std::string_view tmpl, std::span<const std::pair<std::string_view, std::string_view>> values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    bool replaced = false;
    if (tmpl[pos] == '{') {
      for (const auto& [key, value] : values) {
        if (tmpl.substr(pos).starts_with(key)) {
          out.append(value);
          pos += key.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(tmpl[pos++]);
  }
  return out;
}

}  // namespace

std::string render_prompt(const AgentConfig& config, std::span<const HistoryMessage> history,
                          std::string_view input, const ChainState& state,
                          const tools::ToolRegistry& registry) {
  const auto tools = available_tools(config, state, registry);

  std::string tool_lines, tool_names;
  for (const auto& name : tools) {
    tool_lines += name + ": " + registry.at(name).description + "\n";
    tool_names += (tool_names.empty() ? "" : ", ") + name;
  }
  if (!tool_lines.empty()) tool_lines.pop_back();

  std::string history_text;
  for (const auto& message : history)
    history_text += (message.role == HistoryMessage::Role::Human ? "Human: " : "Assistant: ") + message.text + "\n";
  if (history_text.empty()) history_text = "(none)\n";
  history_text.pop_back();

  const std::string pad = render_steps(state.scratchpad);
  const std::pair<std::string_view, std::string_view> values[] = {
      {"{tools}", tool_lines}, {"{tool_names}", tool_names}, {"{history}", history_text},
      {"{input}", input},      {"{scratchpad}", pad},
  };
  return expand(prompt_template(config.prompt_template_id), values);
}

}  // namespace uat::agent
