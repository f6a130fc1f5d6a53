// SPDX-License-Identifier: Apache-2.0

#include "uat/session/session.hpp"

#include <algorithm>
#include <chrono>
#include <future>

namespace uat::session {

namespace {

constexpr std::array<Side, 2> kSides = {Side::Left, Side::Right};

std::size_t index(Side side) { return side == Side::Left ? 0 : 1; }

// Runs one chain step; anything the runner does not already absorb ends
// the turn with the forced answer.
agent::TurnEffect guarded(agent::ChainRunner& runner, const std::function<agent::TurnEffect()>& step) {
  try {
    return step();
  } catch (const std::exception& e) {
    runner.close();
    return {agent::TurnEffect::Kind::Failed, runner.state().final_answer().value_or(""), {}, e.what()};
  }
}

}  // namespace

Session::Session(SessionRecord record, SessionDeps deps)
    : record_(std::move(record)),
      deps_(std::move(deps)),
      channel_(Side::Left, std::chrono::milliseconds(record_.scenario.insert_timeout_ms)) {
  if (!deps_.left_tools || !deps_.right_tools || !deps_.left_backend || !deps_.right_backend)
    throw std::invalid_argument("session needs tools and a backend for both sides");
  if (!deps_.clock) deps_.clock = system_clock();
  if (!deps_.correlation_ids) deps_.correlation_ids = counting_id_generator(record_.session_id + "-q");
  agent::validate(record_.left_agent, *deps_.left_tools);
  agent::validate(record_.right_agent, *deps_.right_tools);
}

const agent::ChainRunner* Session::chain(Side side) const { return runners_[index(side)].get(); }

Timestamp Session::now() const {
  const Timestamp t = deps_.clock();
  return record_.events.empty() ? t : std::max(t, record_.events.back().at);
}

SessionEvent Session::make_event(EventKind kind) const {
  SessionEvent e;
  e.seq = record_.events.size() + 1;
  e.kind = kind;
  e.at = now();
  return e;
}

void Session::emit(SessionEvent event, std::vector<SessionEvent>& out) {
  apply_event(record_, event);
  out.push_back(std::move(event));
}

void Session::apply_effect(Side side, agent::TurnEffect effect, std::vector<SessionEvent>& out) {
  auto& runner = *runners_[index(side)];
  if (effect.kind == agent::TurnEffect::Kind::AskHuman) {
    auto e = make_event(EventKind::InsertQuery);
    e.side = side;
    e.correlation_id = effect.correlation_id;
    e.payload = effect.text;
    channel_.ask(side, effect.text, effect.correlation_id, e.at);
    emit(std::move(e), out);
    return;
  }
  auto e = make_event(EventKind::BotMessage);
  e.side = side;
  e.payload = effect.text;
  e.trace = runner.trace();
  e.error = effect.error;
  auto& history = history_[index(side)];
  history.push_back({agent::HistoryMessage::Role::Human, runner.input()});
  history.push_back({agent::HistoryMessage::Role::Assistant, effect.text});
  emit(std::move(e), out);
}

std::vector<SessionEvent> Session::fan_out(std::string text) {
  if (record_.finished) throw SessionError(SessionErrc::SessionFinished, "the scenario is finished");
  if (record_.turn_in_flight()) throw SessionError(SessionErrc::Busy, "a turn is in flight");
  std::vector<SessionEvent> out;
  auto e = make_event(EventKind::UserMessage);
  e.payload = text;
  emit(std::move(e), out);

  for (Side side : kSides) {
    const auto i = index(side);
    runners_[i] = std::make_unique<agent::ChainRunner>(
        side == Side::Left ? record_.left_agent : record_.right_agent,
        side == Side::Left ? *deps_.left_tools : *deps_.right_tools,
        side == Side::Left ? *deps_.left_backend : *deps_.right_backend, history_[i], text,
        deps_.correlation_ids, deps_.runner_options);
  }
  auto run = [this](Side side) {
    auto& runner = *runners_[index(side)];
    return guarded(runner, [&] { return runner.run(); });
  };
  agent::TurnEffect left, right;
  if (deps_.parallel) {
    auto pending = std::async(std::launch::async, run, Side::Left);
    right = run(Side::Right);
    left = pending.get();
  } else {
    left = run(Side::Left);
    right = run(Side::Right);
  }
  apply_effect(Side::Left, std::move(left), out);
  apply_effect(Side::Right, std::move(right), out);
  return out;
}

void Session::resume_left(std::string observation, std::vector<SessionEvent>& out) {
  auto& runner = *runners_[0];
  auto effect = guarded(runner, [&] { return runner.resume(std::move(observation)); });
  apply_effect(Side::Left, std::move(effect), out);
}

std::vector<SessionEvent> Session::route_insert_reply(std::string_view correlation_id, std::string text) {
  if (record_.finished) throw SessionError(SessionErrc::SessionFinished, "the scenario is finished");
  const auto it = record_.correlations.find(std::string(correlation_id));
  if (it == record_.correlations.end())
    throw SessionError(SessionErrc::UnknownCorrelation, std::string(correlation_id));
  if (it->second) throw SessionError(SessionErrc::AlreadyAnswered, std::string(correlation_id));
  std::vector<SessionEvent> out;
  auto e = make_event(EventKind::InsertReply);
  e.correlation_id = std::string(correlation_id);
  e.payload = text;
  channel_.answer(correlation_id, text);
  emit(std::move(e), out);
  resume_left(std::move(text), out);
  return out;
}

std::vector<SessionEvent> Session::tick() {
  std::vector<SessionEvent> out;
  if (record_.finished) return out;
  for (const auto& query : channel_.expire(now())) {
    auto e = make_event(EventKind::InsertReply);
    e.correlation_id = query.correlation_id;
    e.payload = std::string(tools::kNoAnswerObservation);
    e.timed_out = true;
    emit(std::move(e), out);
    resume_left(std::string(tools::kNoAnswerObservation), out);
  }
  return out;
}

std::vector<SessionEvent> Session::submit_rating(std::span<const int> positions) {
  std::vector<SessionEvent> out;
  auto e = make_event(EventKind::RatingSubmitted);
  e.payload = encode_positions(positions);
  emit(std::move(e), out);
  return out;
}

std::vector<SessionEvent> Session::submit_feedback(std::string text) {
  std::vector<SessionEvent> out;
  auto e = make_event(EventKind::FeedbackSubmitted);
  e.payload = std::move(text);
  emit(std::move(e), out);
  return out;
}

std::vector<SessionEvent> Session::finish() {
  std::vector<SessionEvent> out;
  emit(make_event(EventKind::ScenarioFinished), out);
  channel_.close();
  return out;
}

}  // namespace uat::session
