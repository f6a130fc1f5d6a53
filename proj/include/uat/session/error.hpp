// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace uat::session {

enum class SessionErrc {
  UnknownScenario,
  InvalidScenario,
  UnknownSession,
  Busy,
  SessionFinished,
  UnknownCorrelation,
  AlreadyAnswered,
  GateClosed,
  RatingMissing,
  InvalidRating,
  InvalidEvent,
  ProtocolError,
  StoreCorrupt,
  StoreUnavailable,
  UnfinishedSession,
  BackendFailure,
};

const char* to_string(SessionErrc code);

class SessionError : public std::runtime_error {
 public:
  SessionError(SessionErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  SessionErrc code() const noexcept { return code_; }

 private:
  SessionErrc code_;
};

}  // namespace uat::session
