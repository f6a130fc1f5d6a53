// SPDX-License-Identifier: Apache-2.0

#include "uat/eval/descriptives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "uat/eval/error.hpp"

namespace uat::eval {

double median(std::span<const double> sample) {
  if (sample.empty()) throw StatError(StatErrc::InvalidArgument, "empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  return sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

Descriptives descriptives(std::span<const double> sample) {
  if (sample.size() < 2) throw StatError(StatErrc::InvalidArgument, "need at least 2 observations");
  const auto n = static_cast<double>(sample.size());

  Descriptives out;
  out.mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : sample) {
    const double d = x - out.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  out.sd = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    out.skew = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  out.min = *lo;
  out.max = *hi;
  out.median = median(sample);
  return out;
}

}  // namespace uat::eval
