// SPDX-License-Identifier: Apache-2.0

// Free-text feedback classifiers.

#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uat/llm/backend.hpp"

namespace uat::llm {

enum class Preference { Left, Right, Neutral, Unclear };

std::string_view to_string(Preference preference);

inline constexpr std::string_view kPreferencePrompt =
    "Classify if the right or the left chatbot is preferred. You can only respond with one word, 'left', "
    "'right', 'neutral', or 'unclear', with this exact spelling.";

/// Case-insensitive one-word match after trimming; anything else is Unclear.
Preference parse_preference(std::string_view completion);

/// Throws std::invalid_argument for blank feedback; backend errors propagate.
Preference classify_preference(std::string_view feedback, Backend& backend);

enum class Sentiment { Positive, Negative };

std::string_view to_string(Sentiment sentiment);

class ClassifierError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SentimentFn = std::function<Sentiment(std::string_view)>;

/// Throws std::invalid_argument for blank text.
Sentiment classify_sentiment(std::string_view text, const SentimentFn& classifier);

/// Offline stub: negative on negation or frustration cues, positive otherwise.
SentimentFn keyword_sentiment();

/// Remote text-classification endpoint taking {"inputs": text} and
/// answering [[{"label": ..., "score": ...}, ...]] (or a flat list).
/// Picks the highest-scoring label; labels starting with "NEG" are negative.
SentimentFn remote_sentiment(std::string url, std::optional<std::string> token = std::nullopt,
                             std::chrono::milliseconds timeout = std::chrono::seconds(30));

/// The label decoding used by remote_sentiment.
Sentiment sentiment_from_response(const std::string& body);

}  // namespace uat::llm
