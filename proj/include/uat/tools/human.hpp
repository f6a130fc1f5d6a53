// SPDX-License-Identifier: Apache-2.0

// Bookkeeping for user-as-a-tool questions: the chain suspends, the
// question travels to the participant, and the reply (or a timeout)
// becomes the Observation.

#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uat/common.hpp"

namespace uat::tools {

inline constexpr std::string_view kNoAnswerObservation = "The human did not answer.";
inline constexpr std::chrono::milliseconds kDefaultHumanTimeout = std::chrono::seconds(300);

struct HumanQuery {
  std::string correlation_id;
  Side side = Side::Left;
  std::string question;
  Timestamp asked_at = 0;

  bool operator==(const HumanQuery&) const = default;
};

enum class HumanErrc { Timeout, SessionClosed, UnknownCorrelation, AlreadyAnswered, WrongSide, QueryPending };

const char* to_string(HumanErrc code);

class HumanError : public std::runtime_error {
 public:
  HumanError(HumanErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  HumanErrc code() const noexcept { return code_; }

 private:
  HumanErrc code_;
};

/// Insert queries of one session. At most one unanswered query per side,
/// and only the enabled side may ask.
class HumanChannel {
 public:
  HumanChannel(Side enabled_side, std::chrono::milliseconds timeout = kDefaultHumanTimeout);

  HumanQuery ask(Side side, std::string question, std::string correlation_id, Timestamp now);

  /// Marks the query answered and returns the observation (the reply verbatim).
  std::string answer(std::string_view correlation_id, std::string reply);

  /// Queries older than the timeout; each is closed and should resume its
  /// chain with kNoAnswerObservation.
  std::vector<HumanQuery> expire(Timestamp now);

  /// Refuses every further question and answer.
  void close();
  bool closed() const { return closed_; }

  std::optional<HumanQuery> open_query(Side side) const;
  std::chrono::milliseconds timeout() const { return timeout_; }

 private:
  Side enabled_side_;
  std::chrono::milliseconds timeout_;
  bool closed_ = false;
  std::map<std::string, HumanQuery, std::less<>> open_;
  std::map<std::string, bool, std::less<>> answered_;
};

/// Emits a fresh query for the chain on `side` through the channel.
HumanQuery ask_user(std::string question, Side side, HumanChannel& channel, const IdGenerator& ids, Timestamp now);

}  // namespace uat::tools
