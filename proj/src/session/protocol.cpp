// SPDX-License-Identifier: Apache-2.0

#include "uat/session/protocol.hpp"

#include <array>

namespace uat::session {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 6> kTypeNames = {"start_session",   "user_message",    "insert_reply",
                                                        "submit_rating",   "submit_feedback", "finish_scenario"};

[[noreturn]] void bad(const std::string& why) { throw SessionError(SessionErrc::ProtocolError, why); }

std::string field(const json& doc, const char* name, bool required) {
  if (!doc.contains(name)) {
    if (required) bad(std::string("missing field ") + name);
    return {};
  }
  if (!doc[name].is_string()) bad(std::string("field ") + name + " must be a string");
  return doc[name].get<std::string>();
}

}  // namespace

std::string_view to_string(ClientFrameType type) { return kTypeNames[static_cast<std::size_t>(type)]; }

ClientFrame parse_client_frame(std::string_view frame) {
  if (frame.find('\n') != std::string_view::npos || frame.find('\r') != std::string_view::npos)
    bad("frames must not contain raw line breaks");
  json doc;
  try {
    doc = json::parse(frame);
  } catch (const json::exception& e) {
    bad(e.what());
  }
  if (!doc.is_object()) bad("frame must be a JSON object");
  const auto type = field(doc, "type", true);
  ClientFrame out;
  std::size_t i = 0;
  while (i < kTypeNames.size() && kTypeNames[i] != type) ++i;
  if (i == kTypeNames.size()) bad("unknown frame type '" + type + "'");
  out.type = static_cast<ClientFrameType>(i);
  out.session_id = field(doc, "session_id", false);
  switch (out.type) {
    case ClientFrameType::StartSession:
      out.scenario_id = field(doc, "scenario_id", true);
      out.participant_id = field(doc, "participant_id", false);
      break;
    case ClientFrameType::UserMessage:
    case ClientFrameType::SubmitFeedback:
      out.text = field(doc, "text", true);
      break;
    case ClientFrameType::InsertReply:
      out.correlation_id = field(doc, "correlation_id", true);
      out.text = field(doc, "text", true);
      break;
    case ClientFrameType::SubmitRating:
      if (!doc.contains("positions") || !doc["positions"].is_array()) bad("missing positions array");
      for (const auto& p : doc["positions"]) {
        if (!p.is_number_integer()) bad("positions must be integers");
        out.positions.push_back(p.get<int>());
      }
      break;
    case ClientFrameType::FinishScenario:
      break;
  }
  return out;
}

std::string serialize(const ClientFrame& f) {
  json doc = {{"type", std::string(to_string(f.type))}};
  if (!f.session_id.empty()) doc["session_id"] = f.session_id;
  switch (f.type) {
    case ClientFrameType::StartSession:
      doc["scenario_id"] = f.scenario_id;
      if (!f.participant_id.empty()) doc["participant_id"] = f.participant_id;
      break;
    case ClientFrameType::UserMessage:
    case ClientFrameType::SubmitFeedback:
      doc["text"] = f.text;
      break;
    case ClientFrameType::InsertReply:
      doc["correlation_id"] = f.correlation_id;
      doc["text"] = f.text;
      break;
    case ClientFrameType::SubmitRating:
      doc["positions"] = f.positions;
      break;
    case ClientFrameType::FinishScenario:
      break;
  }
  return to_frame(doc);
}

std::string to_frame(const json& message) { return message.dump(-1, ' ', false, json::error_handler_t::replace); }

json session_started_message(const SessionRecord& record) {
  json items = json::array();
  for (const auto& item : eval::kComparisonItems)
    items.push_back({{"construct", std::string(eval::to_string(item.construct))},
                     {"item_index", item.item_index},
                     {"text", std::string(item.text)}});
  const auto& s = record.scenario;
  return {{"type", "session_started"},
          {"session_id", record.session_id},
          {"scenario_id", s.scenario_id},
          {"placeholder_text", s.placeholder_text},
          {"min_bot_messages", s.min_bot_messages},
          {"rating_variant", std::string(eval::to_string(s.rating_variant))},
          {"scale_points", eval::scale_points(s.rating_variant)},
          {"stem", std::string(eval::kComparisonStem)},
          {"items", items}};
}

json error_message(std::string_view session_id, SessionErrc code, std::string_view message) {
  return {{"type", "error"},
          {"session_id", std::string(session_id)},
          {"code", to_string(code)},
          {"message", std::string(message)}};
}

json rating_enabled_message(std::string_view session_id) {
  return {{"type", "rating_enabled"}, {"session_id", std::string(session_id)}};
}

std::vector<json> messages_for(const SessionRecord& record, std::span<const SessionEvent> events, bool gate_was_open) {
  std::vector<json> out;
  // Re-derive the gate along the events so rating_enabled lands right
  // after the message that opened it.
  std::array<int, 2> counts = record.bot_messages;
  for (const auto& e : events)
    if (e.kind == EventKind::BotMessage || e.kind == EventKind::InsertQuery) --counts[*e.side == Side::Left ? 0 : 1];
  bool open = gate_was_open;
  const int min = record.scenario.min_bot_messages;
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::BotMessage:
      case EventKind::InsertQuery: {
        const bool insert = e.kind == EventKind::InsertQuery;
        json m = {{"type", insert ? "insert_query" : "bot_message"},
                  {"session_id", record.session_id},
                  {"seq", e.seq},
                  {"side", std::string(to_string(*e.side))},
                  {"text", e.payload},
                  {"is_insert", insert}};
        if (insert) m["correlation_id"] = e.correlation_id;
        out.push_back(std::move(m));
        if (!e.error.empty())
          out.push_back(error_message(record.session_id, SessionErrc::BackendFailure, e.error));
        ++counts[*e.side == Side::Left ? 0 : 1];
        if (!open && counts[0] >= min && counts[1] >= min) {
          open = true;
          out.push_back(rating_enabled_message(record.session_id));
        }
        break;
      }
      case EventKind::ScenarioFinished:
        out.push_back({{"type", "scenario_done"}, {"session_id", record.session_id}, {"seq", e.seq}});
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace uat::session
