// SPDX-License-Identifier: Apache-2.0

#include "uat/session/service.hpp"

#include <filesystem>

#include "uat/llm/http_backend.hpp"

namespace uat::session {

using nlohmann::json;

BackendFactory default_backends() {
  return [](const Scenario& s, Side side) -> std::unique_ptr<llm::Backend> {
    const auto& script = side == Side::Left ? s.left_script : s.right_script;
    if (script) return std::make_unique<llm::ScriptedBackend>(llm::ScriptedBackend::from_file(*script));
    return std::make_unique<llm::HttpBackend>(llm::options_from_env());
  };
}

ToolDepsFactory default_tool_deps(std::shared_ptr<tools::LookupClient> lookup) {
  if (!lookup) lookup = std::make_shared<tools::HttpLookupClient>();
  return [lookup](const Scenario& s) {
    tools::ToolDeps deps;
    deps.lookup = lookup;
    if (!s.corpus_paths.empty()) {
      std::vector<std::filesystem::path> files(s.corpus_paths.begin(), s.corpus_paths.end());
      const auto chunks = tools::load_corpus(files);
      auto embedder = std::make_shared<tools::LexicalEmbedder>(tools::LexicalEmbedder::fit(chunks));
      deps.index = std::make_shared<tools::DocIndex>(tools::build_index(chunks, *embedder, s.scenario_id));
      deps.embedder = embedder;
    }
    return deps;
  };
}

SessionService::SessionService(ScenarioCatalog catalog, ServiceOptions options)
    : catalog_(std::move(catalog)), options_(std::move(options)) {
  if (!options_.backends || !options_.tool_deps || !options_.clock || !options_.session_ids)
    throw std::invalid_argument("service options are incomplete");
  if (options_.data_dir) store_.emplace(*options_.data_dir);
}

SessionService::Registries SessionService::registries_for(const Scenario& scenario) {
  std::lock_guard lock(mutex_);
  if (const auto it = registries_.find(scenario.scenario_id); it != registries_.end()) return it->second;
  const auto deps = options_.tool_deps(scenario);
  Registries r{std::make_shared<const tools::ToolRegistry>(tools::make_registry(scenario.tool_names_enabled, deps)),
               std::make_shared<const tools::ToolRegistry>(tools::make_registry(scenario.tool_names_vanilla, deps))};
  registries_.emplace(scenario.scenario_id, r);
  return r;
}

std::string SessionService::start_session(std::string_view scenario_id, std::string participant_id) {
  const Scenario& scenario = catalog_.at(scenario_id);
  const auto registries = registries_for(scenario);
  std::string id;
  {
    std::lock_guard lock(mutex_);
    do id = options_.session_ids();
    while (sessions_.count(id));
  }
  auto record = create_session(scenario, id, std::move(participant_id));
  SessionDeps deps;
  deps.left_tools = registries.left;
  deps.right_tools = registries.right;
  deps.left_backend = options_.backends(scenario, Side::Left);
  deps.right_backend = options_.backends(scenario, Side::Right);
  deps.clock = options_.clock;
  deps.correlation_ids = counting_id_generator(id + "-q");
  deps.runner_options = options_.runner_options;
  deps.parallel = options_.parallel_chains;
  auto entry = std::make_shared<Entry>();
  entry->session = std::make_unique<Session>(std::move(record), std::move(deps));
  if (store_) store_->create(entry->session->record());
  std::lock_guard lock(mutex_);
  sessions_.emplace(id, std::move(entry));
  return id;
}

std::shared_ptr<SessionService::Entry> SessionService::find(std::string_view session_id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw SessionError(SessionErrc::UnknownSession, "no session " + std::string(session_id));
  return it->second;
}

SessionRecord SessionService::snapshot(std::string_view session_id) const {
  const auto entry = find(session_id);
  std::lock_guard lock(entry->mutex);
  return entry->session->record();
}

std::vector<std::string> SessionService::session_ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, entry] : sessions_) ids.push_back(id);
  return ids;
}

std::vector<SessionRecord> SessionService::finished_sessions() const {
  std::vector<SessionRecord> out;
  for (const auto& id : session_ids()) {
    auto record = snapshot(id);
    if (record.finished) out.push_back(std::move(record));
  }
  return out;
}

json SessionService::health() const {
  std::lock_guard lock(mutex_);
  return {{"status", "ok"},
          {"sessions", sessions_.size()},
          {"scenarios", catalog_.ids()},
          {"persistent", store_.has_value()}};
}

std::vector<std::string> SessionService::dispatch(std::string& bound, const ClientFrame& frame) {
  if (frame.type == ClientFrameType::StartSession) {
    if (!bound.empty()) throw SessionError(SessionErrc::ProtocolError, "connection already has a session");
    bound = start_session(frame.scenario_id, frame.participant_id);
    return {to_frame(session_started_message(snapshot(bound)))};
  }
  if (!frame.session_id.empty() && frame.session_id != bound) {
    if (!bound.empty()) throw SessionError(SessionErrc::UnknownSession, "frame names another session");
    find(frame.session_id);
    bound = frame.session_id;
  }
  if (bound.empty()) throw SessionError(SessionErrc::UnknownSession, "start a session first");

  const auto entry = find(bound);
  std::lock_guard lock(entry->mutex);
  Session& session = *entry->session;
  const bool gate_before = gate_rating(session.record());
  std::vector<SessionEvent> events;
  switch (frame.type) {
    case ClientFrameType::UserMessage: events = session.fan_out(frame.text); break;
    case ClientFrameType::InsertReply: events = session.route_insert_reply(frame.correlation_id, frame.text); break;
    case ClientFrameType::SubmitRating: events = session.submit_rating(frame.positions); break;
    case ClientFrameType::SubmitFeedback: events = session.submit_feedback(frame.text); break;
    case ClientFrameType::FinishScenario: events = session.finish(); break;
    case ClientFrameType::StartSession: break;
  }
  if (store_) store_->append(bound, events);
  std::vector<std::string> frames;
  for (const auto& m : messages_for(session.record(), events, gate_before)) frames.push_back(to_frame(m));
  return frames;
}

std::vector<std::string> SessionService::handle_frame(std::string& bound, std::string_view text) {
  try {
    return dispatch(bound, parse_client_frame(text));
  } catch (const SessionError& e) {
    return {to_frame(error_message(bound, e.code(), e.what()))};
  } catch (const std::exception& e) {
    return {to_frame(error_message(bound, SessionErrc::InvalidEvent, e.what()))};
  }
}

std::vector<std::string> SessionService::tick(std::string_view session_id) {
  const auto entry = find(session_id);
  std::lock_guard lock(entry->mutex);
  Session& session = *entry->session;
  const bool gate_before = gate_rating(session.record());
  const auto events = session.tick();
  if (store_) store_->append(session_id, events);
  std::vector<std::string> frames;
  for (const auto& m : messages_for(session.record(), events, gate_before)) frames.push_back(to_frame(m));
  return frames;
}

}  // namespace uat::session
