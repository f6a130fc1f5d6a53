// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace uat::eval {

enum class Tail { One, Two };

// Direction of the alternative hypothesis relative to mu (or to zero
// association for correlations).
enum class Alternative { TwoSided, Less, Greater };

constexpr Tail tail_of(Alternative alt) {
  return alt == Alternative::TwoSided ? Tail::Two : Tail::One;
}

struct StatResult {
  double statistic = 0.0;
  std::optional<double> df;
  double p_value = 1.0;
  std::optional<double> effect_size;
  Tail tail = Tail::Two;
  // Standard-normal statistic when a normal approximation was used.
  std::optional<double> z;
  bool exact = false;
};

struct WilcoxonOptions {
  // Exact enumeration is used up to this many non-zero differences
  // when there are no ties among |x - mu|.
  std::size_t exact_max_n = 25;
  bool continuity_correction = true;
};

/// Wilcoxon signed-rank test of the sample against location mu. The
/// statistic V is the sum of ranks of positive differences; zero
/// differences are dropped. effect_size is the matched-pairs rank-biserial
/// correlation.
StatResult wilcoxon_signed_rank(std::span<const double> sample, double mu, Alternative alt,
                                const WilcoxonOptions& options = {});

/// Number of sign assignments of ranks 1..n whose positive-rank sum equals
/// s, for s = 0 .. n(n+1)/2.
std::vector<double> signed_rank_counts(std::size_t n);

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

SampleSummary summarize(std::span<const double> sample);

/// One-sample t-test with Cohen's d = |mean - mu| / sd as effect size.
StatResult t_one_sample(const SampleSummary& summary, double mu, Alternative alt);
StatResult t_one_sample(std::span<const double> sample, double mu, Alternative alt);

/// Kendall's tau-b with tie corrections; p from the normal approximation
/// of S = concordant - discordant with tie-corrected variance.
StatResult kendall_tau(std::span<const double> x, std::span<const double> y,
                       Alternative alt = Alternative::TwoSided);

// Distribution helpers shared by the tests above.
double student_t_cdf(double t, double df);
double normal_cdf(double z);

}  // namespace uat::eval
