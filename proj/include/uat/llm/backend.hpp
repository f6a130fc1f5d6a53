// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uat::llm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct CompletionRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 512;
  std::string model_id;
  std::vector<std::string> stop;

  bool operator==(const CompletionRequest&) const = default;
};

/// Throws std::invalid_argument for empty user/system content or a
/// non-positive token budget.
void validate(const CompletionRequest& request);

enum class BackendErrc { Exhausted, Network, Auth, RateLimit, BadResponse };

const char* to_string(BackendErrc code);

class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  BackendErrc code() const noexcept { return code_; }

 private:
  BackendErrc code_;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Replays canned completions in order and records every request.
/// Not thread-safe: confine one instance to one session's event loop.
class ScriptedBackend final : public Backend {
 public:
  explicit ScriptedBackend(std::vector<std::string> script);

  /// Loads a script file: completions separated by lines consisting of
  /// exactly "---".
  static ScriptedBackend from_file(const std::filesystem::path& path);
  static std::vector<std::string> parse_script(std::string_view text);

  std::string complete(const CompletionRequest& request) override;

  std::size_t cursor() const { return cursor_; }
  const std::vector<std::string>& script() const { return script_; }
  const std::vector<CompletionRequest>& recorded_requests() const { return recorded_; }
  bool exhausted() const { return cursor_ >= script_.size(); }

 private:
  std::vector<std::string> script_;
  std::size_t cursor_ = 0;
  std::vector<CompletionRequest> recorded_;
};

/// Adapts any callable; used for rule-based fakes.
class FunctionBackend final : public Backend {
 public:
  using Fn = std::function<std::string(const CompletionRequest&)>;
  explicit FunctionBackend(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const CompletionRequest& request) override { return fn_(request); }

 private:
  Fn fn_;
};

}  // namespace uat::llm
