// SPDX-License-Identifier: Apache-2.0

#include "uat/eval/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "uat/csv.hpp"
#include "uat/eval/error.hpp"

namespace uat::eval {

namespace {

std::string num(double v, const char* fmt = "%.15g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

template <typename T>
T parse_number(const std::string& text, const char* column) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw StatError(StatErrc::InvalidArgument, std::string("bad ") + column + " '" + text + "'");
  return value;
}

std::string_view alternative_name(Alternative alt) {
  switch (alt) {
    case Alternative::TwoSided: return "two-sided";
    case Alternative::Less: return "less";
    case Alternative::Greater: return "greater";
  }
  return "";
}

}  // namespace

std::string write_ratings_csv(std::span<const RatingRow> rows) {
  std::string out = csv::join_row(std::vector<std::string>(kRatingColumns.begin(), kRatingColumns.end()));
  for (const auto& r : rows)
    out += csv::join_row({r.participant_id, r.session_id, r.scenario_id, std::string(to_string(r.variant)),
                          std::string(to_string(r.construct)), std::to_string(r.item_index),
                          std::to_string(r.ui_position), num(r.value)});
  return out;
}

std::vector<RatingRow> read_ratings_csv(std::string_view text) {
  std::vector<std::vector<std::string>> table;
  try {
    table = csv::parse(text);
  } catch (const std::runtime_error& e) {
    throw StatError(StatErrc::InvalidArgument, e.what());
  }
  if (table.empty()) throw StatError(StatErrc::InvalidArgument, "missing header row");
  if (table.front() != std::vector<std::string>(kRatingColumns.begin(), kRatingColumns.end()))
    throw StatError(StatErrc::InvalidArgument, "unexpected header row");
  std::vector<RatingRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.size() != kRatingColumns.size())
      throw StatError(StatErrc::InvalidArgument, "row " + std::to_string(i) + " has the wrong number of fields");
    RatingRow r;
    r.participant_id = f[0];
    r.session_id = f[1];
    r.scenario_id = f[2];
    const auto variant = variant_from_string(f[3]);
    const auto construct = construct_from_string(f[4]);
    if (!variant || !construct) throw StatError(StatErrc::InvalidArgument, "row " + std::to_string(i) + ": bad label");
    r.variant = *variant;
    r.construct = *construct;
    r.item_index = parse_number<int>(f[5], "item_index");
    r.ui_position = parse_number<int>(f[6], "ui_position");
    r.value = parse_number<double>(f[7], "value");
    if (r.item_index < 0 || r.item_index >= item_count(r.construct))
      throw StatError(StatErrc::OutOfRange, "row " + std::to_string(i) + ": item_index out of range");
    if (map_rating(r.ui_position, r.variant) != r.value)
      throw StatError(StatErrc::InvalidArgument, "row " + std::to_string(i) + ": value does not match position");
    rows.push_back(std::move(r));
  }
  return rows;
}

Report analyze(std::span<const RatingRow> rows, Alternative alternative) {
  Report report;
  report.alternative = alternative;

  // (scenario, construct) -> session -> item values
  std::map<std::pair<std::string, Construct>, std::map<std::string, std::vector<std::optional<double>>>> cells;
  std::map<std::string, RatingVariant> variants;
  std::map<std::string, std::string> participant_of;
  for (const auto& r : rows) {
    const auto [it, fresh] = variants.emplace(r.scenario_id, r.variant);
    if (!fresh && it->second != r.variant)
      throw StatError(StatErrc::MixedVariant, "scenario " + r.scenario_id + " mixes rating variants");
    auto& items = cells[{r.scenario_id, r.construct}][r.session_id];
    items.resize(static_cast<std::size_t>(item_count(r.construct)));
    if (items[r.item_index])
      throw StatError(StatErrc::InvalidArgument, "duplicate item in session " + r.session_id);
    items[r.item_index] = r.value;
    participant_of[r.session_id] = r.participant_id;
  }

  // participant -> (construct, scenario) -> score, for the ICC
  std::map<Construct, std::map<std::string, std::map<std::string, double>>> by_participant;

  for (const auto& [key, sessions] : cells) {
    ConstructAnalysis a;
    a.scenario_id = key.first;
    a.construct = key.second;
    a.variant = variants.at(key.first);
    const auto k = static_cast<Eigen::Index>(item_count(key.second));
    std::vector<double> scores;
    std::vector<std::vector<double>> complete;
    for (const auto& [session, items] : sessions) {
      bool full = true;
      std::vector<double> values;
      for (const auto& v : items) {
        full = full && v.has_value();
        if (v) values.push_back(*v);
      }
      if (!full) {
        a.notes.push_back("session " + session + " is missing items and was skipped");
        continue;
      }
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      scores.push_back(mean);
      complete.push_back(values);
      if (!participant_of[session].empty()) by_participant[key.second][participant_of[session]][key.first] = mean;
    }
    a.n = scores.size();
    auto attempt = [&](const char* what, auto&& fn) {
      try {
        fn();
      } catch (const StatError& e) {
        a.notes.push_back(std::string(what) + ": " + e.what());
      }
    };
    if (a.n >= 2) {
      attempt("descriptives", [&] { a.summary = descriptives(scores); });
      Eigen::MatrixXd m(static_cast<Eigen::Index>(complete.size()), k);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = complete[i][j];
      attempt("alpha", [&] { a.alpha = cronbach_alpha(m); });
      attempt("lambda6", [&] { a.lambda6 = guttman_lambda6(m); });
      attempt("t-test", [&] { a.t_test = t_one_sample(std::span<const double>(scores), 0.0, alternative); });
    } else {
      a.notes.push_back("fewer than 2 sessions");
    }
    if (a.n >= 1) attempt("wilcoxon", [&] { a.wilcoxon = wilcoxon_signed_rank(scores, 0.0, alternative); });
    report.constructs.push_back(std::move(a));
  }

  for (Construct c : kConstructs) {
    const auto found = by_participant.find(c);
    if (found == by_participant.end()) continue;
    std::set<std::string> scenarios;
    for (const auto& [p, per] : found->second)
      for (const auto& [s, v] : per) scenarios.insert(s);
    IccAnalysis icc;
    icc.construct = c;
    icc.scenarios = scenarios.size();
    std::vector<std::vector<double>> matrix;
    for (const auto& [p, per] : found->second) {
      if (per.size() != scenarios.size()) continue;
      std::vector<double> row;
      for (const auto& s : scenarios) row.push_back(per.at(s));
      matrix.push_back(std::move(row));
    }
    icc.participants = matrix.size();
    if (icc.scenarios < 2 || icc.participants < 2) {
      icc.note = "needs at least 2 participants who rated at least 2 scenarios";
    } else {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(matrix.size()), static_cast<Eigen::Index>(icc.scenarios));
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = matrix[i][j];
      try {
        icc.icc = icc_avg_random(m);
      } catch (const StatError& e) {
        icc.note = e.what();
      }
    }
    report.icc.push_back(std::move(icc));
  }
  return report;
}

std::string format_text(const Report& report) {
  std::ostringstream out;
  out << "Tests against 0 (no preference), alternative: " << alternative_name(report.alternative) << "\n";
  out << "Negative scores favour the left (insert-enabled) bot.\n";
  std::string scenario;
  for (const auto& a : report.constructs) {
    if (a.scenario_id != scenario) {
      scenario = a.scenario_id;
      out << "\nScenario " << scenario << " (" << to_string(a.variant) << ")\n";
    }
    out << "  " << to_string(a.construct) << ": n=" << a.n;
    if (a.summary)
      out << " mean=" << num(a.summary->mean, "%.2f") << " sd=" << num(a.summary->sd, "%.2f")
          << " median=" << num(a.summary->median, "%.2f") << " min=" << num(a.summary->min, "%.2f")
          << " max=" << num(a.summary->max, "%.2f") << " skew=" << num(a.summary->skew, "%.2f")
          << " kurtosis=" << num(a.summary->kurtosis, "%.2f");
    out << "\n";
    if (a.alpha || a.lambda6)
      out << "    reliability: alpha=" << (a.alpha ? num(*a.alpha, "%.3f") : "NA")
          << " lambda6=" << (a.lambda6 ? num(*a.lambda6, "%.3f") : "NA") << "\n";
    if (a.t_test)
      out << "    t-test: t=" << num(a.t_test->statistic, "%.4f") << " df=" << num(*a.t_test->df, "%.0f")
          << " p=" << num(a.t_test->p_value, "%.5f") << " d=" << num(*a.t_test->effect_size, "%.2f") << "\n";
    if (a.wilcoxon)
      out << "    wilcoxon: V=" << num(a.wilcoxon->statistic, "%g") << " p=" << num(a.wilcoxon->p_value, "%.5f")
          << (a.wilcoxon->exact ? " (exact)" : " (normal approximation)") << "\n";
    for (const auto& note : a.notes) out << "    note: " << note << "\n";
  }
  if (!report.icc.empty()) out << "\nAgreement across scenarios (ICC, average random raters)\n";
  for (const auto& icc : report.icc) {
    out << "  " << to_string(icc.construct) << ": participants=" << icc.participants
        << " scenarios=" << icc.scenarios << " icc=" << (icc.icc ? num(*icc.icc, "%.3f") : "NA");
    if (!icc.note.empty()) out << " (" << icc.note << ")";
    out << "\n";
  }
  return out.str();
}

std::string format_table(const Report& report) {
  std::string out = csv::join_row({"scenario_id", "construct", "variant", "n", "mean", "sd", "median", "min", "max",
                                   "skew", "kurtosis", "alpha", "lambda6", "t", "df", "t_p", "cohens_d", "V",
                                   "wilcoxon_p", "alternative"});
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
  for (const auto& a : report.constructs) {
    const auto& s = a.summary;
    out += csv::join_row({a.scenario_id, std::string(to_string(a.construct)), std::string(to_string(a.variant)),
                          std::to_string(a.n), s ? num(s->mean) : "", s ? num(s->sd) : "", s ? num(s->median) : "",
                          s ? num(s->min) : "", s ? num(s->max) : "", s ? num(s->skew) : "",
                          s ? num(s->kurtosis) : "", opt(a.alpha), opt(a.lambda6),
                          a.t_test ? num(a.t_test->statistic) : "", a.t_test ? opt(a.t_test->df) : "",
                          a.t_test ? num(a.t_test->p_value) : "", a.t_test ? opt(a.t_test->effect_size) : "",
                          a.wilcoxon ? num(a.wilcoxon->statistic) : "", a.wilcoxon ? num(a.wilcoxon->p_value) : "",
                          std::string(alternative_name(report.alternative))});
  }
  return out;
}

}  // namespace uat::eval
