// SPDX-License-Identifier: Apache-2.0

#include "uat/llm/classifiers.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "uat/common.hpp"
#include "uat/llm/http_backend.hpp"

// Last: <resolv.h> defines a _res macro that breaks Eigen headers.
#include <httplib.h>
#include <json.hpp>

namespace uat::llm {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(Preference preference) {
  switch (preference) {
    case Preference::Left: return "left";
    case Preference::Right: return "right";
    case Preference::Neutral: return "neutral";
    case Preference::Unclear: return "unclear";
  }
  return "unclear";
}

Preference parse_preference(std::string_view completion) {
  const auto word = lower(trim(completion));
  if (word == "left") return Preference::Left;
  if (word == "right") return Preference::Right;
  if (word == "neutral") return Preference::Neutral;
  return Preference::Unclear;
}

Preference classify_preference(std::string_view feedback, Backend& backend) {
  if (trim(feedback).empty()) throw std::invalid_argument("feedback must not be empty");
  CompletionRequest request;
  request.messages = {{Role::System, std::string(kPreferencePrompt)}, {Role::User, std::string(feedback)}};
  return parse_preference(backend.complete(request));
}

std::string_view to_string(Sentiment sentiment) {
  return sentiment == Sentiment::Positive ? "positive" : "negative";
}

Sentiment classify_sentiment(std::string_view text, const SentimentFn& classifier) {
  if (trim(text).empty()) throw std::invalid_argument("text must not be empty");
  if (!classifier) throw ClassifierError("no sentiment classifier configured");
  return classifier(text);
}

SentimentFn keyword_sentiment() {
  return [](std::string_view text) {
    static constexpr std::array<std::string_view, 9> kWords = {
        "not", "no", "never", "nothing", "cannot", "bad", "worse", "worst", "hate"};
    static constexpr std::array<std::string_view, 8> kStems = {
        "frustrat", "frusting", "annoy", "confus", "useless", "poor", "boring", "slow"};
    const auto lowered = lower(text);
    std::string word;
    auto negative = [&] {
      if (word.size() > 3 && word.ends_with("n't")) return true;
      for (auto w : kWords)
        if (word == w) return true;
      for (auto stem : kStems)
        if (word.starts_with(stem)) return true;
      return false;
    };
    for (std::size_t i = 0; i <= lowered.size(); ++i) {
      const char c = i < lowered.size() ? lowered[i] : ' ';
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
        word += c;
        continue;
      }
      if (!word.empty() && negative()) return Sentiment::Negative;
      word.clear();
    }
    return Sentiment::Positive;
  };
}

Sentiment sentiment_from_response(const std::string& body) {
  using nlohmann::json;
  try {
    auto doc = json::parse(body);
    if (doc.is_array() && !doc.empty() && doc.front().is_array()) doc = doc.front();
    if (!doc.is_array() || doc.empty()) throw ClassifierError("empty classification response");
    const auto best = std::max_element(doc.begin(), doc.end(), [](const json& a, const json& b) {
      return a.at("score").get<double>() < b.at("score").get<double>();
    });
    const auto label = lower(best->at("label").get<std::string>());
    return label.rfind("neg", 0) == 0 ? Sentiment::Negative : Sentiment::Positive;
  } catch (const json::exception& e) {
    throw ClassifierError(std::string("malformed classification response: ") + e.what());
  }
}

SentimentFn remote_sentiment(std::string url, std::optional<std::string> token, std::chrono::milliseconds timeout) {
  return [url = std::move(url), token = std::move(token), timeout](std::string_view text) {
    const auto [origin, path] = split_base_url(url);
    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    client.set_connection_timeout(secs);
    client.set_read_timeout(secs);
    httplib::Headers headers;
    if (token) headers.emplace("Authorization", "Bearer " + *token);
    const auto body = nlohmann::json{{"inputs", std::string(text)}}.dump();
    auto result = client.Post(path.empty() ? "/" : path, headers, body, "application/json");
    if (!result) throw ClassifierError("sentiment endpoint unreachable: " + httplib::to_string(result.error()));
    if (result->status != 200) throw ClassifierError("sentiment endpoint returned HTTP " + std::to_string(result->status));
    return sentiment_from_response(result->body);
  };
}

}  // namespace uat::llm
