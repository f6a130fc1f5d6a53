// SPDX-License-Identifier: Apache-2.0

#include "uat/eval/power.hpp"

#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>

#include "uat/eval/error.hpp"

namespace uat::eval {

double power_one_sample_t(double d, std::size_t n, double alpha, Tail tail) {
  if (n < 2) throw StatError(StatErrc::InvalidArgument, "need n >= 2");
  const double df = static_cast<double>(n - 1);
  const double ncp = d * std::sqrt(static_cast<double>(n));
  const boost::math::students_t_distribution<double> central(df);
  const boost::math::non_central_t_distribution<double> shifted(df, ncp);
  if (tail == Tail::One) {
    const double critical = boost::math::quantile(boost::math::complement(central, alpha));
    return boost::math::cdf(boost::math::complement(shifted, critical));
  }
  const double critical = boost::math::quantile(boost::math::complement(central, alpha / 2.0));
  return boost::math::cdf(boost::math::complement(shifted, critical)) +
         boost::math::cdf(shifted, -critical);
}

std::size_t power_n_one_sample_t(double d, double alpha, double power, Tail tail) {
  if (!(d > 0.0) || !std::isfinite(d)) throw StatError(StatErrc::InvalidArgument, "effect size must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatError(StatErrc::InvalidArgument, "alpha must lie in (0, 1)");
  if (!(power > 0.0 && power < 1.0)) throw StatError(StatErrc::InvalidArgument, "power must lie in (0, 1)");

  auto reaches = [&](std::size_t n) { return power_one_sample_t(d, n, alpha, tail) >= power; };

  std::size_t lo = 1;  // largest n known to fall short (n = 1 is never allowed)
  std::size_t hi = 2;
  while (!reaches(hi)) {
    lo = hi;
    if (hi == kPowerSearchCap)
      throw StatError(StatErrc::NoConvergence, "required n exceeds the search cap");
    hi = std::min(hi * 2, kPowerSearchCap);
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (reaches(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace uat::eval
