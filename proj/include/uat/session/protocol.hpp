// SPDX-License-Identifier: Apache-2.0

// Websocket wire format: one JSON object per text frame, no raw newlines.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uat/session/events.hpp"

namespace uat::session {

enum class ClientFrameType { StartSession, UserMessage, InsertReply, SubmitRating, SubmitFeedback, FinishScenario };

std::string_view to_string(ClientFrameType type);

struct ClientFrame {
  ClientFrameType type = ClientFrameType::StartSession;
  std::string session_id;  // optional on the wire once a connection is bound
  std::string scenario_id;
  std::string participant_id;
  std::string text;
  std::string correlation_id;
  std::vector<int> positions;
};

/// Throws SessionError(ProtocolError) for raw newlines, malformed JSON,
/// unknown types and missing or mistyped fields.
ClientFrame parse_client_frame(std::string_view frame);
std::string serialize(const ClientFrame& frame);

/// Compact dump; JSON escaping keeps it free of raw newlines.
std::string to_frame(const nlohmann::json& message);

nlohmann::json session_started_message(const SessionRecord& record);
nlohmann::json error_message(std::string_view session_id, SessionErrc code, std::string_view message);
nlohmann::json rating_enabled_message(std::string_view session_id);

/// Server messages announcing newly appended events. gate_was_open is the
/// gate before the first of them; rating_enabled is sent once, when the
/// gate opens.
std::vector<nlohmann::json> messages_for(const SessionRecord& record, std::span<const SessionEvent> events,
                                         bool gate_was_open);

}  // namespace uat::session
