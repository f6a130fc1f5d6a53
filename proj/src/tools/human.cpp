// SPDX-License-Identifier: Apache-2.0

#include "uat/tools/human.hpp"

namespace uat::tools {

const char* to_string(HumanErrc code) {
  switch (code) {
    case HumanErrc::Timeout: return "Timeout";
    case HumanErrc::SessionClosed: return "SessionClosed";
    case HumanErrc::UnknownCorrelation: return "UnknownCorrelation";
    case HumanErrc::AlreadyAnswered: return "AlreadyAnswered";
    case HumanErrc::WrongSide: return "WrongSide";
    case HumanErrc::QueryPending: return "QueryPending";
  }
  return "Unknown";
}

HumanChannel::HumanChannel(Side enabled_side, std::chrono::milliseconds timeout)
    : enabled_side_(enabled_side), timeout_(timeout) {}

HumanQuery HumanChannel::ask(Side side, std::string question, std::string correlation_id, Timestamp now) {
  if (closed_) throw HumanError(HumanErrc::SessionClosed, "session is closed");
  if (side != enabled_side_) throw HumanError(HumanErrc::WrongSide, "only the enabled agent may ask the human");
  if (open_query(side)) throw HumanError(HumanErrc::QueryPending, "an insert query is already pending");
  if (correlation_id.empty() || open_.count(correlation_id) || answered_.count(correlation_id))
    throw HumanError(HumanErrc::UnknownCorrelation, "correlation id must be fresh");
  HumanQuery query{correlation_id, side, std::move(question), now};
  open_.emplace(std::move(correlation_id), query);
  return query;
}

std::string HumanChannel::answer(std::string_view correlation_id, std::string reply) {
  if (closed_) throw HumanError(HumanErrc::SessionClosed, "session is closed");
  if (answered_.count(correlation_id))
    throw HumanError(HumanErrc::AlreadyAnswered, "query " + std::string(correlation_id) + " was already answered");
  const auto it = open_.find(correlation_id);
  if (it == open_.end())
    throw HumanError(HumanErrc::UnknownCorrelation, "no query " + std::string(correlation_id));
  answered_.emplace(it->first, true);
  open_.erase(it);
  return reply;
}

std::vector<HumanQuery> HumanChannel::expire(Timestamp now) {
  std::vector<HumanQuery> expired;
  if (closed_) return expired;
  for (auto it = open_.begin(); it != open_.end();) {
    if (now - it->second.asked_at >= timeout_.count()) {
      expired.push_back(it->second);
      answered_.emplace(it->first, true);
      it = open_.erase(it);
    } else {
      ++it;
    }
  }
  return expired;
}

void HumanChannel::close() { closed_ = true; }

std::optional<HumanQuery> HumanChannel::open_query(Side side) const {
  for (const auto& [id, query] : open_)
    if (query.side == side) return query;
  return std::nullopt;
}

HumanQuery ask_user(std::string question, Side side, HumanChannel& channel, const IdGenerator& ids, Timestamp now) {
  return channel.ask(side, std::move(question), ids(), now);
}

}  // namespace uat::tools
