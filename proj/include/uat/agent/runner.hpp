// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "uat/agent/chain.hpp"
#include "uat/agent/prompt.hpp"
#include "uat/common.hpp"

namespace uat::llm {
class Backend;
}

namespace uat::agent {

inline constexpr std::string_view kChainStart = "Entering new chain...";
inline constexpr std::string_view kChainEnd = "Finished chain.";

struct RunnerOptions {
  double temperature = 0.0;
  int max_tokens = 512;
  std::string model_id;
};

/// What the driver needs from the outside world after running a chain as
/// far as it can on its own.
struct TurnEffect {
  enum class Kind { AskHuman, Finished, Failed };
  Kind kind = Kind::Finished;
  // Question for AskHuman, the reply for Finished and Failed.
  std::string text;
  std::string correlation_id;  // AskHuman only
  std::string error;           // Failed only
};

/// Drives one agent turn: prompt, complete, parse, advance, run tools,
/// until the chain finishes or suspends on a user-as-a-tool call.
/// Parse failures are repaired rather than surfaced: a completion without
/// any directive is taken as the Final Answer, and an Action without an
/// Action Input runs with an empty input.
class ChainRunner {
 public:
  ChainRunner(AgentConfig config, const tools::ToolRegistry& registry, llm::Backend& backend,
              std::vector<HistoryMessage> history, std::string input, IdGenerator ids,
              RunnerOptions options = {});

  /// Requires a Running chain.
  TurnEffect run();
  /// Requires an AwaitingHuman chain; the reply becomes the Observation.
  TurnEffect resume(std::string reply);
  /// Abandons the turn (session closed); the chain becomes Aborted.
  void close();

  const ChainState& state() const { return state_; }
  const AgentConfig& config() const { return config_; }
  const std::string& input() const { return input_; }

  /// Human-readable reasoning trace framed by the chain start/end lines.
  std::string trace() const;

 private:
  TurnEffect drive();

  AgentConfig config_;
  const tools::ToolRegistry* registry_;
  llm::Backend* backend_;
  std::vector<HistoryMessage> history_;
  std::string input_;
  IdGenerator ids_;
  RunnerOptions options_;
  ChainState state_;
};

}  // namespace uat::agent
