// SPDX-License-Identifier: Apache-2.0

#include "uat/eval/rating.hpp"

#include <algorithm>

#include "uat/eval/error.hpp"

namespace uat::eval {

std::string_view to_string(Construct construct) {
  switch (construct) {
    case Construct::Control: return "Control";
    case Construct::Naturalness: return "Naturalness";
    case Construct::IntentEffectiveness: return "IntentEffectiveness";
    case Construct::Satisfaction: return "Satisfaction";
  }
  return "Unknown";
}

std::optional<Construct> construct_from_string(std::string_view text) {
  for (Construct c : kConstructs)
    if (to_string(c) == text) return c;
  return std::nullopt;
}

std::string_view to_string(RatingVariant variant) {
  return variant == RatingVariant::Midpoint7 ? "Midpoint7" : "ForcedChoice6";
}

std::optional<RatingVariant> variant_from_string(std::string_view text) {
  if (text == "Midpoint7") return RatingVariant::Midpoint7;
  if (text == "ForcedChoice6") return RatingVariant::ForcedChoice6;
  return std::nullopt;
}

int scale_points(RatingVariant variant) { return variant == RatingVariant::Midpoint7 ? 7 : 6; }

int item_count(Construct construct) {
  return static_cast<int>(std::count_if(kComparisonItems.begin(), kComparisonItems.end(),
                                        [&](const auto& item) { return item.construct == construct; }));
}

double map_rating(int ui_position, RatingVariant variant) {
  const int points = scale_points(variant);
  if (ui_position < 1 || ui_position > points)
    throw StatError(StatErrc::OutOfRange, "scale position " + std::to_string(ui_position) +
                                              " outside 1.." + std::to_string(points));
  return static_cast<double>(ui_position) - (points + 1) / 2.0;
}

ConstructScore score_construct(std::span<const RatingResponse> responses) {
  if (responses.empty()) throw StatError(StatErrc::ItemCountMismatch, "no responses");
  const auto& first = responses.front();
  for (const auto& r : responses) {
    if (r.variant != first.variant) throw StatError(StatErrc::MixedVariant, "responses mix scale variants");
    if (r.construct != first.construct || r.scenario_id != first.scenario_id)
      throw StatError(StatErrc::InvalidArgument, "responses mix constructs or scenarios");
  }
  const int expected = item_count(first.construct);
  if (static_cast<int>(responses.size()) != expected)
    throw StatError(StatErrc::ItemCountMismatch,
                    std::string(to_string(first.construct)) + " expects " + std::to_string(expected) +
                        " items, got " + std::to_string(responses.size()));
  std::vector<bool> seen(static_cast<std::size_t>(expected), false);
  double sum = 0.0;
  for (const auto& r : responses) {
    if (r.item_index < 0 || r.item_index >= expected || seen[static_cast<std::size_t>(r.item_index)])
      throw StatError(StatErrc::ItemCountMismatch, "item indices must cover each item once");
    seen[static_cast<std::size_t>(r.item_index)] = true;
    sum += map_rating(r.ui_position, r.variant);
  }
  return {first.construct, sum / expected, first.scenario_id};
}

std::vector<RatingResponse> responses_from_positions(std::span<const int> positions,
                                                     RatingVariant variant,
                                                     const std::string& scenario_id) {
  if (positions.size() != kComparisonItems.size())
    throw StatError(StatErrc::ItemCountMismatch, "expected " + std::to_string(kComparisonItems.size()) +
                                                     " positions, got " + std::to_string(positions.size()));
  std::vector<RatingResponse> out;
  out.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    map_rating(positions[i], variant);
    out.push_back({kComparisonItems[i].construct, kComparisonItems[i].item_index, positions[i], variant,
                   scenario_id});
  }
  return out;
}

QuestionnaireScore score_questionnaire(std::span<const int> answers,
                                       const std::set<std::size_t>& reverse_keys, int scale_max,
                                       std::string instrument, std::string subscale) {
  if (scale_max < 2) throw StatError(StatErrc::InvalidArgument, "scale_max must be at least 2");
  if (answers.empty()) throw StatError(StatErrc::InvalidArgument, "no answers");
  if (!reverse_keys.empty() && *reverse_keys.rbegin() >= answers.size())
    throw StatError(StatErrc::OutOfRange, "reverse key beyond the last item");
  double sum = 0.0;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const int a = answers[i];
    if (a < 1 || a > scale_max)
      throw StatError(StatErrc::OutOfRange, "answer " + std::to_string(a) + " outside 1.." +
                                                std::to_string(scale_max));
    sum += reverse_keys.count(i) ? scale_max + 1 - a : a;
  }
  return {std::move(instrument), std::move(subscale), sum / static_cast<double>(answers.size()),
          static_cast<int>(answers.size())};
}

}  // namespace uat::eval
