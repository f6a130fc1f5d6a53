// SPDX-License-Identifier: Apache-2.0

// Live chat-completions provider over HTTP(S).

#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "uat/llm/backend.hpp"
#include "uat/tools/retrieval.hpp"

namespace uat::llm {

struct HttpBackendOptions {
  // Everything before "/chat/completions", e.g. "https://api.openai.com/v1".
  std::string base_url;
  std::string api_key;
  std::string model_id = "gpt-3.5-turbo";
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds timeout{60000};
};

/// Reads PROVIDER_API_KEY and PROVIDER_BASE_URL; throws BackendError(Auth)
/// when the key is unset.
HttpBackendOptions options_from_env();

/// Splits "https://host:port/prefix" into ("https://host:port", "/prefix").
std::pair<std::string, std::string> split_base_url(const std::string& url);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Retries Network and RateLimit failures with doubling backoff. Auth and
/// malformed responses fail immediately. Safe to call concurrently.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(HttpBackendOptions options, Sleeper sleeper = {});
  std::string complete(const CompletionRequest& request) override;

  const HttpBackendOptions& options() const { return options_; }

 private:
  std::string post(const std::string& path, const std::string& body) const;

  HttpBackendOptions options_;
  Sleeper sleeper_;
  std::string origin_;
  std::string prefix_;

  friend class ProviderEmbedder;
};

std::string request_body(const CompletionRequest& request, const std::string& default_model);
/// choices[0].message.content; BackendError(BadResponse) otherwise.
std::string completion_text(const std::string& response_body);

/// Embeddings endpoint adapter for retrieval.
class ProviderEmbedder final : public tools::Embedder {
 public:
  ProviderEmbedder(HttpBackendOptions options, std::string model_id, Eigen::Index dimension);
  Eigen::VectorXd embed(std::string_view text) const override;
  Eigen::Index dimension() const override { return dimension_; }

 private:
  HttpBackend backend_;
  std::string model_id_;
  Eigen::Index dimension_;
};

}  // namespace uat::llm
