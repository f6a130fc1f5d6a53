// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace uat::eval {

struct Descriptives {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double skew = 0.0;      // g1 = m3 / m2^1.5
  double kurtosis = 0.0;  // g2 = m4 / m2^2 - 3
};

/// Requires n >= 2. Skew and kurtosis are 0 for a constant sample.
Descriptives descriptives(std::span<const double> sample);

double median(std::span<const double> sample);

}  // namespace uat::eval
