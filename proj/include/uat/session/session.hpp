// SPDX-License-Identifier: Apache-2.0

// One live participant session: both agents, the human channel and the
// event-sourced record. Not thread-safe; the service serializes access.

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uat/agent/runner.hpp"
#include "uat/llm/backend.hpp"
#include "uat/session/events.hpp"
#include "uat/tools/human.hpp"
#include "uat/tools/registry.hpp"

namespace uat::session {

struct SessionDeps {
  std::shared_ptr<const tools::ToolRegistry> left_tools;
  std::shared_ptr<const tools::ToolRegistry> right_tools;
  std::unique_ptr<llm::Backend> left_backend;
  std::unique_ptr<llm::Backend> right_backend;
  Clock clock;
  IdGenerator correlation_ids;
  agent::RunnerOptions runner_options;
  // Run the two chains of a turn on separate threads. Their effects are
  // still applied left first, so the log does not depend on timing.
  bool parallel = false;
};

class Session {
 public:
  Session(SessionRecord record, SessionDeps deps);

  const SessionRecord& record() const { return record_; }
  const std::string& id() const { return record_.session_id; }

  /// Starts a turn on both agents with the same text. Throws
  /// SessionError(Busy) while a turn is in flight, SessionFinished after
  /// the scenario ended. Returns the appended events.
  std::vector<SessionEvent> fan_out(std::string text);

  /// Resumes the enabled chain with the reply as its Observation.
  std::vector<SessionEvent> route_insert_reply(std::string_view correlation_id, std::string text);

  /// Answers insert queries older than the scenario's timeout with the
  /// no-answer observation.
  std::vector<SessionEvent> tick();

  std::vector<SessionEvent> submit_rating(std::span<const int> positions);
  std::vector<SessionEvent> submit_feedback(std::string text);
  std::vector<SessionEvent> finish();

  std::optional<tools::HumanQuery> pending_query() const { return channel_.open_query(Side::Left); }
  /// The runner of the current or last turn on that side.
  const agent::ChainRunner* chain(Side side) const;
  Timestamp now() const;

 private:
  SessionEvent make_event(EventKind kind) const;
  void emit(SessionEvent event, std::vector<SessionEvent>& out);
  void apply_effect(Side side, agent::TurnEffect effect, std::vector<SessionEvent>& out);
  void resume_left(std::string observation, std::vector<SessionEvent>& out);

  SessionRecord record_;
  SessionDeps deps_;
  tools::HumanChannel channel_;
  std::array<std::vector<agent::HistoryMessage>, 2> history_;
  std::array<std::unique_ptr<agent::ChainRunner>, 2> runners_;
};

}  // namespace uat::session
