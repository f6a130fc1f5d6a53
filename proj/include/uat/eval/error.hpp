// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace uat::eval {

enum class StatErrc {
  InvalidArgument,
  DegenerateData,
  SingularCovariance,
  AllZeroDifferences,
  ZeroVariance,
  NoConvergence,
  OutOfRange,
  ItemCountMismatch,
  MixedVariant,
};

const char* to_string(StatErrc code);

class StatError : public std::runtime_error {
 public:
  StatError(StatErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  StatErrc code() const noexcept { return code_; }

 private:
  StatErrc code_;
};

}  // namespace uat::eval
