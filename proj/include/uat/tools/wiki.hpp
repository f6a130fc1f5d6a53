// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uat::tools {

enum class LookupErrc { NoResults, Network, Timeout, BadResponse };

const char* to_string(LookupErrc code);

class LookupError : public std::runtime_error {
 public:
  LookupError(LookupErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  LookupErrc code() const noexcept { return code_; }

 private:
  LookupErrc code_;
};

/// Issues GET requests for a path-and-query target and returns the body.
class LookupClient {
 public:
  virtual ~LookupClient() = default;
  virtual std::string get(const std::string& target) = 0;
};

class HttpLookupClient final : public LookupClient {
 public:
  explicit HttpLookupClient(std::string base_url = "https://en.wikipedia.org",
                            std::chrono::milliseconds timeout = std::chrono::seconds(10));
  std::string get(const std::string& target) override;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

/// Serves recorded response bodies keyed by request target.
class FixtureLookupClient final : public LookupClient {
 public:
  explicit FixtureLookupClient(std::map<std::string, std::string> bodies);

  /// Reads <dir>/index.json, an object mapping request targets to body
  /// file names in the same directory.
  static std::shared_ptr<FixtureLookupClient> from_directory(const std::filesystem::path& dir);

  std::string get(const std::string& target) override;
  std::vector<std::string> requests() const;

 private:
  std::map<std::string, std::string> bodies_;
  mutable std::mutex mutex_;
  std::vector<std::string> requests_;
};

std::string url_encode(std::string_view text);

/// Target of the search request (action=query, list=search, top hit only).
std::string wiki_search_target(std::string_view query);
/// Target of the page summary request for a page title.
std::string wiki_summary_target(std::string_view title);

/// Cuts text to at most max_bytes without splitting a UTF-8 sequence.
std::string truncate_utf8(std::string text, std::size_t max_bytes);

inline constexpr std::size_t kDefaultSummaryChars = 1500;

/// Plain-text summary of the top search hit, capped at max_chars bytes.
std::string wiki_search(std::string_view query, LookupClient& client,
                        std::size_t max_chars = kDefaultSummaryChars);

}  // namespace uat::tools
