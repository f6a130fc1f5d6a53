// SPDX-License-Identifier: Apache-2.0

#include "uat/eval/error.hpp"

namespace uat::eval {

const char* to_string(StatErrc code) {
  switch (code) {
    case StatErrc::InvalidArgument: return "InvalidArgument";
    case StatErrc::DegenerateData: return "DegenerateData";
    case StatErrc::SingularCovariance: return "SingularCovariance";
    case StatErrc::AllZeroDifferences: return "AllZeroDifferences";
    case StatErrc::ZeroVariance: return "ZeroVariance";
    case StatErrc::NoConvergence: return "NoConvergence";
    case StatErrc::OutOfRange: return "OutOfRange";
    case StatErrc::ItemCountMismatch: return "ItemCountMismatch";
    case StatErrc::MixedVariant: return "MixedVariant";
  }
  return "Unknown";
}

}  // namespace uat::eval
