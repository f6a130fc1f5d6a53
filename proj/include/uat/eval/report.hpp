// SPDX-License-Identifier: Apache-2.0

// Batch analysis of the ratings export: per scenario and construct,
// descriptives, reliabilities and location tests against "no preference".

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uat/eval/descriptives.hpp"
#include "uat/eval/inference.hpp"
#include "uat/eval/rating.hpp"
#include "uat/eval/reliability.hpp"

namespace uat::eval {

struct RatingRow {
  std::string participant_id;
  std::string session_id;
  std::string scenario_id;
  RatingVariant variant = RatingVariant::Midpoint7;
  Construct construct = Construct::Control;
  int item_index = 0;
  int ui_position = 1;
  double value = 0.0;

  bool operator==(const RatingRow&) const = default;
};

inline constexpr std::array<std::string_view, 8> kRatingColumns = {
    "participant_id", "session_id", "scenario_id", "variant", "construct", "item_index", "ui_position", "value"};

/// Header row plus one row per item response, columns as kRatingColumns.
std::string write_ratings_csv(std::span<const RatingRow> rows);
/// Inverse of write_ratings_csv. Rows whose value disagrees with the
/// mapped position are rejected. Throws StatError(InvalidArgument).
std::vector<RatingRow> read_ratings_csv(std::string_view text);

struct ConstructAnalysis {
  std::string scenario_id;
  Construct construct = Construct::Control;
  RatingVariant variant = RatingVariant::Midpoint7;
  std::size_t n = 0;  // sessions
  std::optional<Descriptives> summary;
  std::optional<double> alpha;
  std::optional<double> lambda6;
  std::optional<StatResult> t_test;
  std::optional<StatResult> wilcoxon;
  std::vector<std::string> notes;  // statistics that could not be computed
};

struct IccAnalysis {
  Construct construct = Construct::Control;
  std::size_t participants = 0;
  std::size_t scenarios = 0;
  std::optional<double> icc;
  std::string note;
};

struct Report {
  Alternative alternative = Alternative::Less;
  std::vector<ConstructAnalysis> constructs;
  std::vector<IccAnalysis> icc;
};

/// Construct scores are item means per session. Tests run against 0, the
/// no-preference point; with Alternative::Less they ask whether the
/// enabled (left) bot is preferred. ICC treats scenarios as raters over
/// participants who completed all of them.
Report analyze(std::span<const RatingRow> rows, Alternative alternative = Alternative::Less);

std::string format_text(const Report& report);
/// One row per scenario and construct; empty cells for missing values.
std::string format_table(const Report& report);

}  // namespace uat::eval
