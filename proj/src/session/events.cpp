// SPDX-License-Identifier: Apache-2.0

#include "uat/session/events.hpp"

namespace uat::session {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 7> kKindNames = {
    "UserMessage", "BotMessage", "InsertQuery", "InsertReply", "RatingSubmitted", "FeedbackSubmitted",
    "ScenarioFinished"};

std::size_t index(Side side) { return side == Side::Left ? 0 : 1; }

[[noreturn]] void reject(SessionErrc code, const std::string& why) { throw SessionError(code, why); }

}  // namespace

std::string_view to_string(EventKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<EventKind> event_kind_from_string(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == text) return static_cast<EventKind>(i);
  return std::nullopt;
}

json to_json(const SessionEvent& e) {
  json doc = {{"seq", e.seq}, {"kind", std::string(to_string(e.kind))}, {"payload", e.payload}, {"at", e.at}};
  if (e.side) doc["side"] = std::string(to_string(*e.side));
  if (!e.correlation_id.empty()) doc["correlation_id"] = e.correlation_id;
  if (!e.trace.empty()) doc["trace"] = e.trace;
  if (!e.error.empty()) doc["error"] = e.error;
  if (e.timed_out) doc["timed_out"] = true;
  return doc;
}

SessionEvent event_from_json(const json& doc) {
  SessionEvent e;
  try {
    e.seq = doc.at("seq").get<std::uint64_t>();
    const auto kind = event_kind_from_string(doc.at("kind").get<std::string>());
    if (!kind) reject(SessionErrc::InvalidEvent, "unknown event kind");
    e.kind = *kind;
    e.payload = doc.at("payload").get<std::string>();
    e.at = doc.at("at").get<Timestamp>();
    if (doc.contains("side")) {
      e.side = side_from_string(doc.at("side").get<std::string>());
      if (!e.side) reject(SessionErrc::InvalidEvent, "unknown side");
    }
    e.correlation_id = doc.value("correlation_id", std::string{});
    e.trace = doc.value("trace", std::string{});
    e.error = doc.value("error", std::string{});
    e.timed_out = doc.value("timed_out", false);
  } catch (const json::exception& ex) {
    reject(SessionErrc::InvalidEvent, ex.what());
  }
  return e;
}

std::optional<std::string> SessionRecord::open_correlation() const {
  for (const auto& [id, answered] : correlations)
    if (!answered) return id;
  return std::nullopt;
}

SessionRecord create_session(const Scenario& scenario, std::string session_id, std::string participant_id) {
  validate(scenario);
  if (session_id.empty()) reject(SessionErrc::InvalidEvent, "empty session id");
  SessionRecord record;
  record.session_id = std::move(session_id);
  record.participant_id = std::move(participant_id);
  record.scenario = scenario;
  record.left_agent = enabled_config(scenario);
  record.right_agent = vanilla_config(scenario);
  return record;
}

bool gate_rating(const SessionRecord& record) {
  return record.bot_messages[0] >= record.scenario.min_bot_messages &&
         record.bot_messages[1] >= record.scenario.min_bot_messages;
}

std::string encode_positions(std::span<const int> positions) {
  return json(std::vector<int>(positions.begin(), positions.end())).dump();
}

std::vector<int> decode_positions(std::string_view payload) {
  try {
    return json::parse(payload).get<std::vector<int>>();
  } catch (const json::exception& e) {
    reject(SessionErrc::InvalidRating, e.what());
  }
}

void apply_event(SessionRecord& record, SessionEvent event) {
  if (record.finished) reject(SessionErrc::SessionFinished, "no events after the scenario finished");
  const std::uint64_t expected = record.events.size() + 1;
  if (event.seq != expected)
    reject(SessionErrc::InvalidEvent, "sequence " + std::to_string(event.seq) + ", expected " + std::to_string(expected));
  if (!record.events.empty() && event.at < record.events.back().at)
    reject(SessionErrc::InvalidEvent, "timestamp goes backwards");
  const bool sided = event.kind == EventKind::BotMessage || event.kind == EventKind::InsertQuery;
  if (sided != event.side.has_value()) reject(SessionErrc::InvalidEvent, "side is required exactly for bot output");
  const bool correlated = event.kind == EventKind::InsertQuery || event.kind == EventKind::InsertReply;
  if (correlated == event.correlation_id.empty())
    reject(SessionErrc::InvalidEvent, "correlation id is required exactly for insert events");
  if (event.timed_out && event.kind != EventKind::InsertReply)
    reject(SessionErrc::InvalidEvent, "only insert replies can time out");
  if ((!event.trace.empty() || !event.error.empty()) && event.kind != EventKind::BotMessage)
    reject(SessionErrc::InvalidEvent, "only bot messages carry traces");

  switch (event.kind) {
    case EventKind::UserMessage:
      if (record.turn_in_flight()) reject(SessionErrc::Busy, "a turn is in flight");
      record.awaiting_reply = {true, true};
      break;
    case EventKind::BotMessage: {
      const auto i = index(*event.side);
      if (!record.awaiting_reply[i]) reject(SessionErrc::InvalidEvent, "bot message without a pending turn");
      if (i == 0 && record.open_correlation()) reject(SessionErrc::InvalidEvent, "left bot answered with an open insert");
      record.awaiting_reply[i] = false;
      ++record.bot_messages[i];
      break;
    }
    case EventKind::InsertQuery:
      if (*event.side != Side::Left) reject(SessionErrc::InvalidEvent, "only the enabled agent asks the human");
      if (!record.awaiting_reply[0]) reject(SessionErrc::InvalidEvent, "insert query without a pending turn");
      if (record.open_correlation()) reject(SessionErrc::InvalidEvent, "an insert query is already open");
      if (record.correlations.count(event.correlation_id))
        reject(SessionErrc::InvalidEvent, "correlation id reused");
      record.correlations.emplace(event.correlation_id, false);
      ++record.bot_messages[0];
      break;
    case EventKind::InsertReply: {
      const auto it = record.correlations.find(event.correlation_id);
      if (it == record.correlations.end()) reject(SessionErrc::UnknownCorrelation, event.correlation_id);
      if (it->second) reject(SessionErrc::AlreadyAnswered, event.correlation_id);
      it->second = true;
      break;
    }
    case EventKind::RatingSubmitted: {
      if (!gate_rating(record)) reject(SessionErrc::GateClosed, "not enough bot messages yet");
      std::vector<eval::RatingResponse> ratings;
      try {
        ratings = eval::responses_from_positions(decode_positions(event.payload), record.scenario.rating_variant,
                                                 record.scenario.scenario_id);
      } catch (const SessionError&) {
        throw;
      } catch (const std::exception& e) {
        reject(SessionErrc::InvalidRating, e.what());
      }
      record.ratings = std::move(ratings);
      break;
    }
    case EventKind::FeedbackSubmitted:
      record.feedback = event.payload;
      break;
    case EventKind::ScenarioFinished:
      if (!gate_rating(record)) reject(SessionErrc::GateClosed, "not enough bot messages yet");
      if (record.ratings.empty()) reject(SessionErrc::RatingMissing, "submit the rating before finishing");
      if (record.turn_in_flight()) reject(SessionErrc::Busy, "a turn is in flight");
      record.finished = true;
      break;
  }
  record.events.push_back(std::move(event));
}

json header_json(const SessionRecord& record) {
  return {{"session_id", record.session_id},
          {"participant_id", record.participant_id},
          {"scenario", to_json(record.scenario)}};
}

SessionRecord record_from_header(const json& header) {
  try {
    return create_session(scenario_from_json(header.at("scenario")), header.at("session_id").get<std::string>(),
                          header.value("participant_id", std::string{}));
  } catch (const json::exception& e) {
    reject(SessionErrc::InvalidEvent, e.what());
  }
}

namespace {

json agent_json(const agent::AgentConfig& c) {
  return {{"label", std::string(agent::to_string(c.label))},
          {"tool_names", c.tool_names},
          {"max_steps", c.max_steps},
          {"insert_cap", c.insert_cap},
          {"prompt_template_id", c.prompt_template_id}};
}

}  // namespace

json to_json(const SessionRecord& record) {
  json doc = header_json(record);
  doc["left_agent"] = agent_json(record.left_agent);
  doc["right_agent"] = agent_json(record.right_agent);
  doc["events"] = json::array();
  for (const auto& e : record.events) doc["events"].push_back(to_json(e));
  doc["ratings"] = json::array();
  for (const auto& r : record.ratings)
    doc["ratings"].push_back({{"construct", std::string(eval::to_string(r.construct))},
                              {"item_index", r.item_index},
                              {"ui_position", r.ui_position},
                              {"variant", std::string(eval::to_string(r.variant))},
                              {"scenario_id", r.scenario_id}});
  doc["feedback"] = record.feedback ? json(*record.feedback) : json(nullptr);
  doc["finished"] = record.finished;
  doc["awaiting_reply"] = record.awaiting_reply;
  doc["correlations"] = record.correlations;
  doc["bot_messages"] = record.bot_messages;
  return doc;
}

SessionRecord replay(const json& header, std::span<const SessionEvent> events) {
  SessionRecord record = record_from_header(header);
  for (const auto& e : events) apply_event(record, e);
  return record;
}

}  // namespace uat::session
