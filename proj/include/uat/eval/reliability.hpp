// SPDX-License-Identifier: Apache-2.0

// Internal-consistency and agreement coefficients over respondent x item
// (or subject x rater) matrices. All functions accept any dense Eigen
// expression and compute in its scalar type.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

#include "uat/eval/error.hpp"

namespace uat::eval {

struct ReliabilityReport {
  double alpha = 0.0;
  double lambda6 = 0.0;
  std::optional<double> icc;
};

/// Sample covariance of the columns (n - 1 denominator).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> sample_covariance(
    const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  if (data.rows() < 2) throw StatError(StatErrc::InvalidArgument, "need at least 2 rows");
  const auto centered = (data.rowwise() - data.colwise().mean()).eval();
  return (centered.adjoint() * centered) / Scalar(data.rows() - 1);
}

namespace detail {

template <typename Derived>
void require_items(const Eigen::MatrixBase<Derived>& data) {
  if (data.cols() < 2) throw StatError(StatErrc::InvalidArgument, "need at least 2 items");
  if (data.rows() < 2) throw StatError(StatErrc::InvalidArgument, "need at least 2 respondents");
  if (!data.allFinite()) throw StatError(StatErrc::InvalidArgument, "missing or non-finite entries");
}

template <typename Scalar>
bool negligible(Scalar value, Scalar scale) {
  using std::abs;
  return abs(value) <= Scalar(1e-12) * (scale > Scalar(1) ? scale : Scalar(1));
}

}  // namespace detail

/// Cronbach's alpha: k/(k-1) * (1 - sum of item variances / total-score variance).
template <typename Derived>
typename Derived::Scalar cronbach_alpha(const Eigen::MatrixBase<Derived>& items) {
  using Scalar = typename Derived::Scalar;
  detail::require_items(items);
  const auto cov = sample_covariance(items);
  const Scalar total = cov.sum();
  if (detail::negligible(total, cov.diagonal().maxCoeff()))
    throw StatError(StatErrc::DegenerateData, "total score has zero variance");
  const Scalar k = Scalar(items.cols());
  return k / (k - Scalar(1)) * (Scalar(1) - cov.trace() / total);
}

/// Squared multiple correlation of each item on all remaining items,
/// obtained from the least-squares regression implied by the covariance
/// matrix. Exactly collinear items get SMC = 1.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> squared_multiple_correlations(
    const Eigen::MatrixBase<Derived>& items) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  detail::require_items(items);
  const Mat cov = sample_covariance(items);
  const Eigen::Index k = cov.rows();
  const Scalar scale = cov.diagonal().maxCoeff();
  for (Eigen::Index i = 0; i < k; ++i)
    if (detail::negligible(cov(i, i), scale))
      throw StatError(StatErrc::SingularCovariance, "item has zero variance");

  Vec smc(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    // Covariance of the other items, and their covariance with item i.
    Mat others(k - 1, k - 1);
    Vec cross(k - 1);
    for (Eigen::Index r = 0, rr = 0; r < k; ++r) {
      if (r == i) continue;
      cross(rr) = cov(r, i);
      for (Eigen::Index c = 0, cc = 0; c < k; ++c) {
        if (c == i) continue;
        others(rr, cc++) = cov(r, c);
      }
      ++rr;
    }
    const Vec weights = others.completeOrthogonalDecomposition().solve(cross);
    Scalar r2 = cross.dot(weights) / cov(i, i);
    smc(i) = std::clamp(r2, Scalar(0), Scalar(1));
  }
  return smc;
}

/// Guttman's lambda 6: 1 - sum_i var_i (1 - SMC_i) / total-score variance.
template <typename Derived>
typename Derived::Scalar guttman_lambda6(const Eigen::MatrixBase<Derived>& items) {
  using Scalar = typename Derived::Scalar;
  const auto smc = squared_multiple_correlations(items);
  const auto cov = sample_covariance(items);
  const Scalar total = cov.sum();
  if (detail::negligible(total, cov.diagonal().maxCoeff()))
    throw StatError(StatErrc::DegenerateData, "total score has zero variance");
  const Scalar unique =
      (cov.diagonal().array() * (Scalar(1) - smc.array())).sum();
  return Scalar(1) - unique / total;
}

/// Mean squares of the two-way (subjects x raters) analysis of variance
/// without replication.
template <typename Scalar>
struct TwoWayMeanSquares {
  Scalar rows;
  Scalar cols;
  Scalar error;
};

template <typename Derived>
TwoWayMeanSquares<typename Derived::Scalar> two_way_mean_squares(
    const Eigen::MatrixBase<Derived>& ratings) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = ratings.rows();
  const Eigen::Index k = ratings.cols();
  if (n < 2 || k < 2) throw StatError(StatErrc::InvalidArgument, "need at least 2 subjects and 2 raters");
  if (!ratings.allFinite()) throw StatError(StatErrc::InvalidArgument, "incomplete rating matrix");
  const Scalar grand = ratings.mean();
  const Scalar ss_rows = Scalar(k) * (ratings.rowwise().mean().array() - grand).square().sum();
  const Scalar ss_cols = Scalar(n) * (ratings.colwise().mean().array() - grand).square().sum();
  const Scalar ss_total = (ratings.array() - grand).square().sum();
  const Scalar ss_error = ss_total - ss_rows - ss_cols;
  return {ss_rows / Scalar(n - 1), ss_cols / Scalar(k - 1),
          ss_error / Scalar((n - 1) * (k - 1))};
}

/// Two-way random-effects, absolute-agreement, average-measures ICC
/// (Shrout & Fleiss ICC(2,k)): (MSR - MSE) / (MSR + (MSC - MSE) / n).
template <typename Derived>
typename Derived::Scalar icc_avg_random(const Eigen::MatrixBase<Derived>& ratings) {
  using Scalar = typename Derived::Scalar;
  const auto ms = two_way_mean_squares(ratings);
  const Scalar n = Scalar(ratings.rows());
  const Scalar scale = (ratings.array() - ratings.mean()).square().maxCoeff();
  if (detail::negligible(ms.rows, scale))
    throw StatError(StatErrc::DegenerateData, "no between-subject variance");
  const Scalar denominator = ms.rows + (ms.cols - ms.error) / n;
  if (detail::negligible(denominator, scale))
    throw StatError(StatErrc::DegenerateData, "ICC denominator vanishes");
  return (ms.rows - ms.error) / denominator;
}

template <typename Derived>
ReliabilityReport reliability(const Eigen::MatrixBase<Derived>& items) {
  return {static_cast<double>(cronbach_alpha(items)),
          static_cast<double>(guttman_lambda6(items)), std::nullopt};
}

}  // namespace uat::eval
