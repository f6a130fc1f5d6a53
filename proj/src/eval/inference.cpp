// SPDX-License-Identifier: Apache-2.0

#include "uat/eval/inference.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uat/eval/error.hpp"

namespace uat::eval {

double student_t_cdf(double t, double df) {
  return boost::math::cdf(boost::math::students_t_distribution<double>(df), t);
}

double normal_cdf(double z) {
  return boost::math::cdf(boost::math::normal_distribution<double>(), z);
}

namespace {

double normal_p(double z, Alternative alt) {
  switch (alt) {
    case Alternative::Less:
      return normal_cdf(z);
    case Alternative::Greater:
      return normal_cdf(-z);
    case Alternative::TwoSided:
      return std::min(1.0, 2.0 * normal_cdf(-std::abs(z)));
  }
  return 1.0;
}

// Average ranks (1-based) of values; also reports the sizes of tie groups.
std::vector<double> average_ranks(std::span<const double> values, std::vector<std::size_t>& ties) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  ties.clear();
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    if (j > i) ties.push_back(j - i + 1);
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::vector<double> signed_rank_counts(std::size_t n) {
  const std::size_t max_sum = n * (n + 1) / 2;
  std::vector<double> counts(max_sum + 1, 0.0);
  counts[0] = 1.0;
  for (std::size_t rank = 1; rank <= n; ++rank)
    for (std::size_t s = rank * (rank + 1) / 2; s >= rank; --s) counts[s] += counts[s - rank];
  return counts;
}

StatResult wilcoxon_signed_rank(std::span<const double> sample, double mu, Alternative alt,
                                const WilcoxonOptions& options) {
  std::vector<double> diffs;
  diffs.reserve(sample.size());
  for (double x : sample) {
    if (!std::isfinite(x)) throw StatError(StatErrc::InvalidArgument, "non-finite observation");
    if (x - mu != 0.0) diffs.push_back(x - mu);
  }
  if (diffs.empty()) throw StatError(StatErrc::AllZeroDifferences, "every observation equals mu");

  std::vector<double> magnitudes(diffs.size());
  std::transform(diffs.begin(), diffs.end(), magnitudes.begin(), [](double d) { return std::abs(d); });
  std::vector<std::size_t> ties;
  const auto ranks = average_ranks(magnitudes, ties);

  double v = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i)
    if (diffs[i] > 0.0) v += ranks[i];

  const auto n = static_cast<double>(diffs.size());
  const double rank_total = n * (n + 1.0) / 2.0;

  StatResult result;
  result.statistic = v;
  result.tail = tail_of(alt);
  result.effect_size = (v - (rank_total - v)) / rank_total;

  if (ties.empty() && diffs.size() <= options.exact_max_n) {
    const auto counts = signed_rank_counts(diffs.size());
    const double total = std::ldexp(1.0, static_cast<int>(diffs.size()));
    const auto observed = static_cast<std::size_t>(std::llround(v));
    double upper = 0.0;  // P(V >= v)
    double lower = 0.0;  // P(V <= v)
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (s >= observed) upper += counts[s];
      if (s <= observed) lower += counts[s];
    }
    upper /= total;
    lower /= total;
    switch (alt) {
      case Alternative::Greater: result.p_value = upper; break;
      case Alternative::Less: result.p_value = lower; break;
      case Alternative::TwoSided:
        result.p_value = std::min(1.0, 2.0 * (v > rank_total / 2.0 ? upper : lower));
        break;
    }
    result.exact = true;
    return result;
  }

  double tie_term = 0.0;
  for (std::size_t t : ties) {
    const auto tt = static_cast<double>(t);
    tie_term += tt * tt * tt - tt;
  }
  const double sigma = std::sqrt(n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0);
  double shift = v - rank_total / 2.0;
  if (options.continuity_correction) {
    switch (alt) {
      case Alternative::Greater: shift -= 0.5; break;
      case Alternative::Less: shift += 0.5; break;
      case Alternative::TwoSided:
        shift -= shift > 0.0 ? 0.5 : (shift < 0.0 ? -0.5 : 0.0);
        break;
    }
  }
  const double z = shift / sigma;
  result.z = z;
  result.p_value = normal_p(z, alt);
  return result;
}

SampleSummary summarize(std::span<const double> sample) {
  if (sample.size() < 2) throw StatError(StatErrc::InvalidArgument, "need at least 2 observations");
  const auto n = static_cast<double>(sample.size());
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)), sample.size()};
}

StatResult t_one_sample(const SampleSummary& summary, double mu, Alternative alt) {
  if (summary.n < 2) throw StatError(StatErrc::InvalidArgument, "need n >= 2");
  if (!(summary.sd > 0.0)) throw StatError(StatErrc::ZeroVariance, "standard deviation is zero");
  const auto n = static_cast<double>(summary.n);
  const double df = n - 1.0;
  const double t = (summary.mean - mu) / (summary.sd / std::sqrt(n));

  StatResult result;
  result.statistic = t;
  result.df = df;
  result.tail = tail_of(alt);
  result.effect_size = std::abs(summary.mean - mu) / summary.sd;
  switch (alt) {
    case Alternative::Less: result.p_value = student_t_cdf(t, df); break;
    case Alternative::Greater: result.p_value = student_t_cdf(-t, df); break;
    case Alternative::TwoSided:
      result.p_value = std::min(1.0, 2.0 * student_t_cdf(-std::abs(t), df));
      break;
  }
  result.exact = true;
  return result;
}

StatResult t_one_sample(std::span<const double> sample, double mu, Alternative alt) {
  return t_one_sample(summarize(sample), mu, alt);
}

namespace {

// Counts inversions while merge-sorting values in place.
std::uint64_t count_inversions(std::vector<double>& values, std::vector<double>& scratch,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = count_inversions(values, scratch, lo, mid) +
                        count_inversions(values, scratch, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (values[j] < values[i]) {
      swaps += mid - i;
      scratch[out++] = values[j++];
    } else {
      scratch[out++] = values[i++];
    }
  }
  while (i < mid) scratch[out++] = values[i++];
  while (j < hi) scratch[out++] = values[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            values.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

struct TieSums {
  double pairs = 0.0;  // sum t(t-1)/2
  double v_t = 0.0;    // sum t(t-1)(2t+5)
  double v_1 = 0.0;    // sum t(t-1)
  double v_2 = 0.0;    // sum t(t-1)(t-2)
};

template <typename Equal>
TieSums tie_sums(std::size_t n, Equal equal) {
  TieSums sums;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && equal(i, j)) ++j;
    const auto t = static_cast<double>(j - i);
    sums.pairs += t * (t - 1.0) / 2.0;
    sums.v_t += t * (t - 1.0) * (2.0 * t + 5.0);
    sums.v_1 += t * (t - 1.0);
    sums.v_2 += t * (t - 1.0) * (t - 2.0);
    i = j;
  }
  return sums;
}

}  // namespace

// Knight's O(n log n) algorithm for the concordance counts.
StatResult kendall_tau(std::span<const double> x, std::span<const double> y, Alternative alt) {
  if (x.size() != y.size()) throw StatError(StatErrc::InvalidArgument, "length mismatch");
  if (x.size() < 2) throw StatError(StatErrc::InvalidArgument, "need at least 2 pairs");
  const std::size_t n = x.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  const TieSums x_ties = tie_sums(n, [&](std::size_t i, std::size_t j) {
    return x[order[i]] == x[order[j]];
  });
  const TieSums joint_ties = tie_sums(n, [&](std::size_t i, std::size_t j) {
    return x[order[i]] == x[order[j]] && y[order[i]] == y[order[j]];
  });

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  std::vector<double> scratch(n);
  const double discordant = static_cast<double>(count_inversions(ys, scratch, 0, n));
  const TieSums y_ties = tie_sums(n, [&](std::size_t i, std::size_t j) { return ys[i] == ys[j]; });

  const auto nn = static_cast<double>(n);
  const double n0 = nn * (nn - 1.0) / 2.0;
  if (x_ties.pairs == n0 || y_ties.pairs == n0)
    throw StatError(StatErrc::DegenerateData, "a variable is constant");

  const double s = n0 - x_ties.pairs - y_ties.pairs + joint_ties.pairs - 2.0 * discordant;
  const double tau = s / std::sqrt((n0 - x_ties.pairs) * (n0 - y_ties.pairs));

  const double v0 = nn * (nn - 1.0) * (2.0 * nn + 5.0);
  double var_s = (v0 - x_ties.v_t - y_ties.v_t) / 18.0 +
                 x_ties.v_1 * y_ties.v_1 / (2.0 * nn * (nn - 1.0));
  if (n > 2) var_s += x_ties.v_2 * y_ties.v_2 / (9.0 * nn * (nn - 1.0) * (nn - 2.0));

  StatResult result;
  result.statistic = tau;
  result.effect_size = tau;
  result.tail = tail_of(alt);
  const double z = s / std::sqrt(var_s);
  result.z = z;
  result.p_value = normal_p(z, alt);
  return result;
}

}  // namespace uat::eval
