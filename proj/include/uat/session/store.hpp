// SPDX-License-Identifier: Apache-2.0

// Append-only, line-delimited session files: one header line, then one
// line per event. Every line carries a CRC-32 of its JSON body.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uat/session/events.hpp"

namespace uat::session {

class SessionStore {
 public:
  /// Creates the directory if needed; throws SessionError(StoreUnavailable).
  explicit SessionStore(std::filesystem::path dir);

  /// Starts a session file with its header. The file must not exist yet.
  void create(const SessionRecord& record);
  void append(std::string_view session_id, std::span<const SessionEvent> events);

  /// Rebuilds the record by replaying the file through apply_event.
  /// StoreUnavailable when the file cannot be read, StoreCorrupt for a bad
  /// checksum, a malformed line, a sequence gap or an invalid event.
  SessionRecord load(std::string_view session_id) const;
  std::vector<std::string> list() const;

  std::filesystem::path path_for(std::string_view session_id) const;
  const std::filesystem::path& dir() const { return dir_; }

  static std::string encode_line(std::string_view key, const nlohmann::json& body);
  /// Returns {key, body}; throws SessionError(StoreCorrupt).
  static std::pair<std::string, nlohmann::json> decode_line(std::string_view line);

 private:
  std::filesystem::path dir_;
};

}  // namespace uat::session
