// SPDX-License-Identifier: Apache-2.0

// Bipolar direct-comparison scales. Position 1 is the left pole, which is
// always the enabled bot, so negative scores favour insert expansion.

#pragma once

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uat::eval {

enum class Construct { Control, Naturalness, IntentEffectiveness, Satisfaction };

enum class RatingVariant { Midpoint7, ForcedChoice6 };

inline constexpr std::array<Construct, 4> kConstructs = {
    Construct::Control, Construct::Naturalness, Construct::IntentEffectiveness,
    Construct::Satisfaction};

std::string_view to_string(Construct construct);
std::optional<Construct> construct_from_string(std::string_view text);
std::string_view to_string(RatingVariant variant);
std::optional<RatingVariant> variant_from_string(std::string_view text);

/// Number of selectable scale points (7 or 6).
int scale_points(RatingVariant variant);

struct ComparisonItem {
  Construct construct;
  int item_index;  // 0-based within the construct
  std::string_view text;
};

inline constexpr std::string_view kComparisonStem = "Which of the two chats...";

inline constexpr std::array<ComparisonItem, 10> kComparisonItems = {{
    {Construct::Control, 0, "enabled more personal direction?"},
    {Construct::Control, 1, "offered you more autonomy?"},
    {Construct::Control, 2, "let you steer the conversation more?"},
    {Construct::Naturalness, 0, "seemed more authentic?"},
    {Construct::Naturalness, 1, "had a more genuine feel?"},
    {Construct::Naturalness, 2, "was more natural?"},
    {Construct::IntentEffectiveness, 0, "had more suitable responses?"},
    {Construct::IntentEffectiveness, 1, "lived up to your expectations better?"},
    {Construct::Satisfaction, 0, "was more to your liking?"},
    {Construct::Satisfaction, 1, "was more satisfactory?"},
}};

int item_count(Construct construct);

struct RatingResponse {
  Construct construct = Construct::Control;
  int item_index = 0;
  int ui_position = 1;
  RatingVariant variant = RatingVariant::Midpoint7;
  std::string scenario_id;

  bool operator==(const RatingResponse&) const = default;
};

struct ConstructScore {
  Construct construct = Construct::Control;
  double value = 0.0;
  std::string scenario_id;
};

/// Midpoint7: 1..7 -> -3..+3. ForcedChoice6: 1..6 -> -2.5..+2.5 in unit steps.
double map_rating(int ui_position, RatingVariant variant);

/// Mean of the mapped item values of one construct.
ConstructScore score_construct(std::span<const RatingResponse> responses);

/// Expands the ten ordered scale positions of one submission into
/// responses, validating the range for the variant.
std::vector<RatingResponse> responses_from_positions(std::span<const int> positions,
                                                     RatingVariant variant,
                                                     const std::string& scenario_id);

struct QuestionnaireScore {
  std::string instrument;
  std::string subscale;
  double value = 0.0;
  int n_items = 0;
};

/// Likert scoring with reverse keys mapped to scale_max + 1 - answer.
/// Answers outside 1..scale_max and reverse keys outside the item range
/// are rejected.
QuestionnaireScore score_questionnaire(std::span<const int> answers,
                                       const std::set<std::size_t>& reverse_keys, int scale_max,
                                       std::string instrument = {}, std::string subscale = {});

}  // namespace uat::eval
