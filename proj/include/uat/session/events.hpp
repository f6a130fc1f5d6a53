// SPDX-License-Identifier: Apache-2.0

// Event-sourced session record. The live session and the store replay go
// through the same apply_event, so a persisted log always rebuilds the
// record it came from.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uat/agent/chain.hpp"
#include "uat/common.hpp"
#include "uat/eval/rating.hpp"
#include "uat/session/scenario.hpp"

namespace uat::session {

enum class EventKind {
  UserMessage,
  BotMessage,
  InsertQuery,
  InsertReply,
  RatingSubmitted,
  FeedbackSubmitted,
  ScenarioFinished,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view text);

struct SessionEvent {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::UserMessage;
  std::optional<Side> side;    // BotMessage, InsertQuery
  std::string correlation_id;  // InsertQuery, InsertReply
  // Message text; for RatingSubmitted the ten positions as a JSON array.
  std::string payload;
  Timestamp at = 0;
  std::string trace;      // BotMessage: the reasoning trace of the turn
  std::string error;      // BotMessage: backend failure behind a forced answer
  bool timed_out = false;  // InsertReply synthesized by the insert timeout

  bool operator==(const SessionEvent&) const = default;
};

nlohmann::json to_json(const SessionEvent& event);
/// Throws SessionError(InvalidEvent).
SessionEvent event_from_json(const nlohmann::json& doc);

struct SessionRecord {
  std::string session_id;
  std::string participant_id;
  Scenario scenario;
  agent::AgentConfig left_agent;   // enabled
  agent::AgentConfig right_agent;  // vanilla
  std::vector<SessionEvent> events;
  std::vector<eval::RatingResponse> ratings;  // latest submission
  std::optional<std::string> feedback;
  bool finished = false;

  // Derived bookkeeping, rebuilt by apply_event.
  std::array<bool, 2> awaiting_reply{false, false};  // per side, a turn is in flight
  std::map<std::string, bool> correlations;           // id -> answered
  std::array<int, 2> bot_messages{0, 0};              // bot messages incl. insert queries

  bool operator==(const SessionRecord&) const = default;

  bool turn_in_flight() const { return awaiting_reply[0] || awaiting_reply[1]; }
  std::optional<std::string> open_correlation() const;
};

/// A fresh record for a validated scenario, left enabled and right vanilla.
SessionRecord create_session(const Scenario& scenario, std::string session_id, std::string participant_id = {});

/// True iff each side has at least min_bot_messages bot messages. Insert
/// queries count, since they appear in the chat.
bool gate_rating(const SessionRecord& record);

/// Validates the event against the record and applies it. Throws
/// SessionError (InvalidEvent, Busy, SessionFinished, UnknownCorrelation,
/// AlreadyAnswered, GateClosed, RatingMissing, InvalidRating) and leaves
/// the record untouched on failure.
void apply_event(SessionRecord& record, SessionEvent event);

/// Ten scale positions in questionnaire order, encoded as a JSON array.
std::string encode_positions(std::span<const int> positions);
std::vector<int> decode_positions(std::string_view payload);

nlohmann::json header_json(const SessionRecord& record);
SessionRecord record_from_header(const nlohmann::json& header);

/// Full serialized state, derived fields included. Two records are equal
/// iff their dumps are byte-identical.
nlohmann::json to_json(const SessionRecord& record);

/// Replays an event log onto a fresh record built from the header.
SessionRecord replay(const nlohmann::json& header, std::span<const SessionEvent> events);

}  // namespace uat::session
