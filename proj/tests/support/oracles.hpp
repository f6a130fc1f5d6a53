// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used only by the tests. Nothing
// here calls into the library code paths being checked.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace uat::oracle {

using Table = std::vector<std::vector<double>>;  // rows x columns

// ---------------------------------------------------------------- t CDF

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h;
}

inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

inline double t_cdf(double t, double df) {
  const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

// ------------------------------------------------ noncentral t by quadrature

inline double phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// P(T' > c) for T' = (Z + ncp) / sqrt(V / df), V ~ chi^2(df). Integrates
// over u = sqrt(V) with composite Simpson.
inline double noncentral_t_upper(double c, double df, double ncp) {
  const double log_norm = (1.0 - df / 2.0) * std::log(2.0) - std::lgamma(df / 2.0);
  const double upper = std::sqrt(df) + 14.0;
  const int intervals = 40000;
  const double h = upper / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double u = i * h;
    double f = 0.0;
    if (u > 0.0) {
      const double density = std::exp(log_norm + (df - 1.0) * std::log(u) - u * u / 2.0);
      f = density * phi(ncp - c * u / std::sqrt(df));
    } else if (df == 1.0) {
      f = std::exp(log_norm) * phi(ncp);
    }
    const double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += weight * f;
  }
  return sum * h / 3.0;
}

// Upper critical value of the central t by bisection on the oracle CDF.
inline double t_critical(double df, double alpha) {
  double lo = 0.0, hi = 1000.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - t_cdf(mid, df) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::size_t power_n_one_tailed(double d, double alpha, double power) {
  for (std::size_t n = 2; n < 100000; ++n) {
    const double df = static_cast<double>(n - 1);
    if (noncentral_t_upper(t_critical(df, alpha), df, d * std::sqrt(static_cast<double>(n))) >= power)
      return n;
  }
  throw std::runtime_error("oracle did not converge");
}

// ---------------------------------------------------- Wilcoxon enumeration

// Exact one-sided tail probabilities of V for tie-free ranks 1..n by
// walking every one of the 2^n sign patterns.
struct SignedRankTails {
  double upper = 0.0;  // P(V >= v)
  double lower = 0.0;  // P(V <= v)
};

inline SignedRankTails signed_rank_enumeration(unsigned n, unsigned v) {
  std::uint64_t upper = 0, lower = 0;
  const std::uint64_t patterns = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    unsigned sum = 0;
    for (unsigned r = 0; r < n; ++r)
      if (mask >> r & 1U) sum += r + 1;
    upper += sum >= v;
    lower += sum <= v;
  }
  return {static_cast<double>(upper) / patterns, static_cast<double>(lower) / patterns};
}

// Same enumeration, split in two halves whose subset-sum histograms are
// enumerated separately and then combined. Feasible up to n = 25.
inline SignedRankTails signed_rank_enumeration_split(unsigned n, unsigned v) {
  const unsigned first = n / 2;
  auto histogram = [](unsigned from, unsigned to) {
    std::vector<std::uint64_t> counts(1, 0);
    const unsigned size = to - from;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << size); ++mask) {
      unsigned sum = 0;
      for (unsigned r = 0; r < size; ++r)
        if (mask >> r & 1U) sum += from + r + 1;
      if (counts.size() <= sum) counts.resize(sum + 1, 0);
      ++counts[sum];
    }
    return counts;
  };
  const auto a = histogram(0, first);
  const auto b = histogram(first, n);
  std::uint64_t upper = 0, lower = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (i + j >= v) upper += a[i] * b[j];
      if (i + j <= v) lower += a[i] * b[j];
    }
  const double patterns = std::ldexp(1.0, static_cast<int>(n));
  return {static_cast<double>(upper) / patterns, static_cast<double>(lower) / patterns};
}

// ------------------------------------------------------ Kendall brute force

struct KendallCounts {
  double concordant = 0, discordant = 0, ties_x_only = 0, ties_y_only = 0;
};

inline KendallCounts kendall_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  KendallCounts k;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) k.ties_x_only += 1;
      else if (dy == 0) k.ties_y_only += 1;
      else if ((dx > 0) == (dy > 0)) k.concordant += 1;
      else k.discordant += 1;
    }
  return k;
}

inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  const auto k = kendall_pairs(x, y);
  const double pairs = static_cast<double>(x.size() * (x.size() - 1) / 2);
  // Pairs tied in both variables count toward both tie totals.
  double joint = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) joint += (x[i] == x[j] && y[i] == y[j]);
  const double tx = k.ties_x_only + joint;
  const double ty = k.ties_y_only + joint;
  return (k.concordant - k.discordant) / std::sqrt((pairs - tx) * (pairs - ty));
}

// ------------------------------------------------------- ANOVA / reliability

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double icc_2k(const Table& x) {
  const std::size_t n = x.size(), k = x[0].size();
  double grand = 0;
  for (const auto& row : x)
    for (double v : row) grand += v;
  grand /= static_cast<double>(n * k);
  double ssr = 0, ssc = 0, sse = 0;
  std::vector<double> row_mean(n, 0), col_mean(k, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      row_mean[i] += x[i][j] / static_cast<double>(k);
      col_mean[j] += x[i][j] / static_cast<double>(n);
    }
  for (double m : row_mean) ssr += static_cast<double>(k) * (m - grand) * (m - grand);
  for (double m : col_mean) ssc += static_cast<double>(n) * (m - grand) * (m - grand);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double r = x[i][j] - row_mean[i] - col_mean[j] + grand;
      sse += r * r;
    }
  const double msr = ssr / static_cast<double>(n - 1);
  const double msc = ssc / static_cast<double>(k - 1);
  const double mse = sse / static_cast<double>((n - 1) * (k - 1));
  return (msr - mse) / (msr + (msc - mse) / static_cast<double>(n));
}

inline Table covariance(const Table& x) {
  const std::size_t n = x.size(), k = x[0].size();
  std::vector<double> mean(k, 0);
  for (const auto& row : x)
    for (std::size_t j = 0; j < k; ++j) mean[j] += row[j] / static_cast<double>(n);
  Table cov(k, std::vector<double>(k, 0));
  for (const auto& row : x)
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        cov[a][b] += (row[a] - mean[a]) * (row[b] - mean[b]) / static_cast<double>(n - 1);
  return cov;
}

inline double cronbach_alpha(const Table& x) {
  const auto cov = covariance(x);
  const double k = static_cast<double>(cov.size());
  double trace = 0, total = 0;
  for (std::size_t a = 0; a < cov.size(); ++a) {
    trace += cov[a][a];
    for (double v : cov[a]) total += v;
  }
  return k / (k - 1) * (1 - trace / total);
}

// Gauss-Jordan inverse with partial pivoting.
inline Table inverse(Table m) {
  const std::size_t k = m.size();
  Table inv(k, std::vector<double>(k, 0));
  for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    std::swap(m[col], m[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double p = m[col][col];
    if (std::abs(p) < 1e-300) throw std::runtime_error("singular");
    for (std::size_t c = 0; c < k; ++c) {
      m[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      for (std::size_t c = 0; c < k; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

// lambda6 with SMC_i = 1 - 1 / (S_ii * (S^-1)_ii).
inline double guttman_lambda6(const Table& x) {
  const auto cov = covariance(x);
  const auto inv = inverse(cov);
  double unique = 0, total = 0;
  for (std::size_t a = 0; a < cov.size(); ++a) {
    const double smc = 1.0 - 1.0 / (cov[a][a] * inv[a][a]);
    unique += cov[a][a] * (1.0 - smc);
    for (double v : cov[a]) total += v;
  }
  return 1.0 - unique / total;
}

}  // namespace uat::oracle
