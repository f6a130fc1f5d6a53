// SPDX-License-Identifier: Apache-2.0

#include "uat/tools/wiki.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace uat::tools {

const char* to_string(LookupErrc code) {
  switch (code) {
    case LookupErrc::NoResults: return "NoResults";
    case LookupErrc::Network: return "Network";
    case LookupErrc::Timeout: return "Timeout";
    case LookupErrc::BadResponse: return "BadResponse";
  }
  return "Unknown";
}

HttpLookupClient::HttpLookupClient(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {}

std::string HttpLookupClient::get(const std::string& target) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  const httplib::Headers headers = {{"User-Agent", "uat-harness/1.0"}, {"Accept", "application/json"}};
  auto result = client.Get(target, headers);
  if (!result) {
    const auto error = result.error();
    if (error == httplib::Error::ConnectionTimeout)
      throw LookupError(LookupErrc::Timeout, "connection to " + base_url_ + " timed out");
    if (error == httplib::Error::Read)
      throw LookupError(LookupErrc::Timeout, "no response from " + base_url_);
    throw LookupError(LookupErrc::Network, httplib::to_string(error));
  }
  if (result->status == 404) throw LookupError(LookupErrc::NoResults, "not found: " + target);
  if (result->status != 200)
    throw LookupError(LookupErrc::Network, "HTTP " + std::to_string(result->status) + " for " + target);
  return result->body;
}

FixtureLookupClient::FixtureLookupClient(std::map<std::string, std::string> bodies) : bodies_(std::move(bodies)) {}

std::shared_ptr<FixtureLookupClient> FixtureLookupClient::from_directory(const std::filesystem::path& dir) {
  auto read = [](const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read fixture " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  const auto index = nlohmann::json::parse(read(dir / "index.json"));
  std::map<std::string, std::string> bodies;
  for (const auto& [target, file] : index.items()) bodies.emplace(target, read(dir / file.get<std::string>()));
  return std::make_shared<FixtureLookupClient>(std::move(bodies));
}

std::string FixtureLookupClient::get(const std::string& target) {
  {
    std::lock_guard lock(mutex_);
    requests_.push_back(target);
  }
  const auto it = bodies_.find(target);
  if (it == bodies_.end()) throw LookupError(LookupErrc::Network, "no fixture recorded for " + target);
  return it->second;
}

std::vector<std::string> FixtureLookupClient::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::string url_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xF]);
    }
  }
  return out;
}

std::string wiki_search_target(std::string_view query) {
  return "/w/api.php?action=query&list=search&format=json&srlimit=1&srsearch=" + url_encode(query);
}

std::string wiki_summary_target(std::string_view title) {
  std::string underscored(title);
  std::replace(underscored.begin(), underscored.end(), ' ', '_');
  return "/api/rest_v1/page/summary/" + url_encode(underscored);
}

std::string truncate_utf8(std::string text, std::size_t max_bytes) {
  if (text.size() <= max_bytes) return text;
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  text.resize(cut);
  return text;
}

std::string wiki_search(std::string_view query, LookupClient& client, std::size_t max_chars) {
  if (query.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw std::invalid_argument("wiki_search needs a non-empty query");

  std::string title;
  try {
    const auto search = nlohmann::json::parse(client.get(wiki_search_target(query)));
    const auto& hits = search.at("query").at("search");
    if (!hits.is_array() || hits.empty()) throw LookupError(LookupErrc::NoResults, "no results for " + std::string(query));
    title = hits.at(0).at("title").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw LookupError(LookupErrc::BadResponse, std::string("search response: ") + e.what());
  }

  try {
    const auto summary = nlohmann::json::parse(client.get(wiki_summary_target(title)));
    auto extract = summary.value("extract", std::string{});
    if (extract.empty()) throw LookupError(LookupErrc::NoResults, "empty summary for " + title);
    return truncate_utf8(std::move(extract), max_chars);
  } catch (const nlohmann::json::exception& e) {
    throw LookupError(LookupErrc::BadResponse, std::string("summary response: ") + e.what());
  }
}

}  // namespace uat::tools
