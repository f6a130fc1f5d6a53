// SPDX-License-Identifier: Apache-2.0

#include "uat/llm/backend.hpp"

#include <fstream>
#include <sstream>

#include "uat/common.hpp"

namespace uat::llm {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

const char* to_string(BackendErrc code) {
  switch (code) {
    case BackendErrc::Exhausted: return "Exhausted";
    case BackendErrc::Network: return "Network";
    case BackendErrc::Auth: return "Auth";
    case BackendErrc::RateLimit: return "RateLimit";
    case BackendErrc::BadResponse: return "BadResponse";
  }
  return "Unknown";
}

void validate(const CompletionRequest& request) {
  if (request.messages.empty()) throw std::invalid_argument("completion request has no messages");
  for (const auto& m : request.messages)
    if (m.role != Role::Assistant && m.content.empty())
      throw std::invalid_argument("user and system messages must not be empty");
  if (request.max_tokens <= 0) throw std::invalid_argument("max_tokens must be positive");
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> script) : script_(std::move(script)) {}

std::vector<std::string> ScriptedBackend::parse_script(std::string_view text) {
  std::vector<std::string> blocks;
  std::string current;
  bool any = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line == "---") {
      blocks.push_back(trim(current));
      current.clear();
      any = false;
    } else {
      if (any) current.push_back('\n');
      current.append(line);
      any = true;
    }
    pos = end + 1;
  }
  if (!trim(current).empty()) blocks.push_back(trim(current));
  return blocks;
}

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read script file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ScriptedBackend(parse_script(buffer.str()));
}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
  recorded_.push_back(request);
  if (cursor_ >= script_.size())
    throw BackendError(BackendErrc::Exhausted, "script consumed after " + std::to_string(script_.size()) + " completions");
  return script_[cursor_++];
}

}  // namespace uat::llm
