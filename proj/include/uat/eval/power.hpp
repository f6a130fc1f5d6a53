// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "uat/eval/inference.hpp"

namespace uat::eval {

inline constexpr std::size_t kPowerSearchCap = 1'000'000;

/// Power of a one-sample t-test with n observations at standardized
/// effect d (noncentral t with ncp = d * sqrt(n)). One-tailed tests look
/// in the direction of a positive effect.
double power_one_sample_t(double d, std::size_t n, double alpha, Tail tail);

/// Smallest n >= 2 whose power reaches the target.
std::size_t power_n_one_sample_t(double d, double alpha, double power, Tail tail);

}  // namespace uat::eval
