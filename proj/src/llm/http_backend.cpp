// SPDX-License-Identifier: Apache-2.0

#include "uat/llm/http_backend.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <thread>

namespace uat::llm {

using nlohmann::json;

HttpBackendOptions options_from_env() {
  HttpBackendOptions options;
  const char* key = std::getenv("PROVIDER_API_KEY");
  if (key == nullptr || *key == '\0') throw BackendError(BackendErrc::Auth, "PROVIDER_API_KEY is not set");
  options.api_key = key;
  const char* base = std::getenv("PROVIDER_BASE_URL");
  options.base_url = (base != nullptr && *base != '\0') ? base : "https://api.openai.com/v1";
  return options;
}

std::pair<std::string, std::string> split_base_url(const std::string& url) {
  const auto scheme = url.find("://");
  const auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const auto slash = url.find('/', host_start);
  if (slash == std::string::npos) return {url, ""};
  std::string prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

HttpBackend::HttpBackend(HttpBackendOptions options, Sleeper sleeper)
    : options_(std::move(options)), sleeper_(std::move(sleeper)) {
  if (options_.attempts < 1) throw std::invalid_argument("attempts must be positive");
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  std::tie(origin_, prefix_) = split_base_url(options_.base_url);
}

std::string request_body(const CompletionRequest& request, const std::string& default_model) {
  json body;
  body["model"] = request.model_id.empty() ? default_model : request.model_id;
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  body["messages"] = json::array();
  for (const auto& m : request.messages)
    body["messages"].push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  if (!request.stop.empty()) body["stop"] = request.stop;
  return body.dump();
}

std::string completion_text(const std::string& response_body) {
  try {
    const auto doc = json::parse(response_body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw BackendError(BackendErrc::BadResponse, e.what());
  }
}

std::string HttpBackend::post(const std::string& path, const std::string& body) const {
  std::chrono::milliseconds backoff = options_.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      httplib::Client client(origin_);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
      client.set_connection_timeout(secs);
      client.set_read_timeout(secs);
      const httplib::Headers headers = {{"Authorization", "Bearer " + options_.api_key}};
      auto result = client.Post(prefix_ + path, headers, body, "application/json");
      if (!result) throw BackendError(BackendErrc::Network, httplib::to_string(result.error()));
      const int status = result->status;
      if (status == 401 || status == 403) throw BackendError(BackendErrc::Auth, "HTTP " + std::to_string(status));
      if (status == 429) throw BackendError(BackendErrc::RateLimit, "HTTP 429");
      if (status >= 500) throw BackendError(BackendErrc::Network, "HTTP " + std::to_string(status));
      if (status != 200) throw BackendError(BackendErrc::BadResponse, "HTTP " + std::to_string(status));
      return result->body;
    } catch (const BackendError& e) {
      const bool transient = e.code() == BackendErrc::Network || e.code() == BackendErrc::RateLimit;
      if (!transient || attempt >= options_.attempts) throw;
    }
    sleeper_(backoff);
    backoff *= 2;
  }
}

std::string HttpBackend::complete(const CompletionRequest& request) {
  validate(request);
  return completion_text(post("/chat/completions", request_body(request, options_.model_id)));
}

ProviderEmbedder::ProviderEmbedder(HttpBackendOptions options, std::string model_id, Eigen::Index dimension)
    : backend_(std::move(options)), model_id_(std::move(model_id)), dimension_(dimension) {
  if (dimension_ <= 0) throw std::invalid_argument("embedding dimension must be positive");
}

Eigen::VectorXd ProviderEmbedder::embed(std::string_view text) const {
  std::string body = json{{"model", model_id_}, {"input", std::string(text)}}.dump();
  std::string response;
  try {
    response = backend_.post("/embeddings", body);
  } catch (const BackendError& e) {
    throw tools::EmbedError(e.what());
  }
  try {
    const auto values = json::parse(response).at("data").at(0).at("embedding").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(values.size()) != dimension_)
      throw tools::EmbedError("embedding has dimension " + std::to_string(values.size()) + ", expected " +
                              std::to_string(dimension_));
    return Eigen::Map<const Eigen::VectorXd>(values.data(), dimension_);
  } catch (const json::exception& e) {
    throw tools::EmbedError(e.what());
  }
}

}  // namespace uat::llm
