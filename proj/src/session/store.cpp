// SPDX-License-Identifier: Apache-2.0

#include "uat/session/store.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

namespace uat::session {

using nlohmann::json;

namespace {

std::string crc_hex(std::string_view text) {
  boost::crc_32_type crc;
  crc.process_bytes(text.data(), text.size());
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc.checksum()));
  return buf;
}

void check_id(std::string_view id) {
  const bool ok = !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_';
  });
  if (!ok) throw SessionError(SessionErrc::StoreUnavailable, "session id '" + std::string(id) + "' is not storable");
}

}  // namespace

SessionStore::SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_))
    throw SessionError(SessionErrc::StoreUnavailable, "cannot use " + dir_.string());
}

std::filesystem::path SessionStore::path_for(std::string_view session_id) const {
  check_id(session_id);
  return dir_ / (std::string(session_id) + ".jsonl");
}

std::string SessionStore::encode_line(std::string_view key, const json& body) {
  const auto text = body.dump();
  // Fixed layout so the checksum covers exactly the body text.
  return "{\"crc\":\"" + crc_hex(text) + "\",\"" + std::string(key) + "\":" + text + "}";
}

std::pair<std::string, json> SessionStore::decode_line(std::string_view line) {
  try {
    const auto doc = json::parse(line);
    if (!doc.is_object() || doc.size() != 2 || !doc.contains("crc"))
      throw SessionError(SessionErrc::StoreCorrupt, "malformed record");
    for (const auto& [key, body] : doc.items()) {
      if (key == "crc") continue;
      if (crc_hex(body.dump()) != doc["crc"].get<std::string>())
        throw SessionError(SessionErrc::StoreCorrupt, "checksum mismatch");
      return {key, body};
    }
  } catch (const json::exception& e) {
    throw SessionError(SessionErrc::StoreCorrupt, e.what());
  }
  throw SessionError(SessionErrc::StoreCorrupt, "malformed record");
}

void SessionStore::create(const SessionRecord& record) {
  const auto path = path_for(record.session_id);
  if (std::filesystem::exists(path))
    throw SessionError(SessionErrc::StoreUnavailable, "session file already exists: " + path.string());
  std::ofstream out(path, std::ios::binary);
  out << encode_line("header", header_json(record)) << '\n';
  out.flush();
  if (!out) throw SessionError(SessionErrc::StoreUnavailable, "cannot write " + path.string());
  if (!record.events.empty()) append(record.session_id, record.events);
}

void SessionStore::append(std::string_view session_id, std::span<const SessionEvent> events) {
  if (events.empty()) return;
  const auto path = path_for(session_id);
  if (!std::filesystem::exists(path))
    throw SessionError(SessionErrc::StoreUnavailable, "no session file " + path.string());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  for (const auto& e : events) out << encode_line("event", to_json(e)) << '\n';
  out.flush();
  if (!out) throw SessionError(SessionErrc::StoreUnavailable, "cannot append to " + path.string());
}

SessionRecord SessionStore::load(std::string_view session_id) const {
  const auto path = path_for(session_id);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SessionError(SessionErrc::StoreUnavailable, "cannot read " + path.string());
  std::string line;
  std::optional<SessionRecord> record;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) throw SessionError(SessionErrc::StoreCorrupt, "blank line");
      auto [key, body] = decode_line(line);
      if (!record) {
        if (key != "header") throw SessionError(SessionErrc::StoreCorrupt, "missing header");
        record = record_from_header(body);
        if (record->session_id != session_id) throw SessionError(SessionErrc::StoreCorrupt, "header names another session");
        continue;
      }
      if (key != "event") throw SessionError(SessionErrc::StoreCorrupt, "unexpected record " + key);
      apply_event(*record, event_from_json(body));
    }
  } catch (const SessionError& e) {
    if (e.code() == SessionErrc::StoreCorrupt) throw;
    throw SessionError(SessionErrc::StoreCorrupt, path.string() + ": " + e.what());
  }
  if (!record) throw SessionError(SessionErrc::StoreCorrupt, "empty session file");
  return std::move(*record);
}

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec))
    if (entry.path().extension() == ".jsonl") ids.push_back(entry.path().stem().string());
  if (ec) throw SessionError(SessionErrc::StoreUnavailable, ec.message());
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace uat::session
