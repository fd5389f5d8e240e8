// SPDX-License-Identifier: Apache-2.0
#include "rbffd/error.hpp"

namespace rbffd {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BoundaryTooCoarse: return "BoundaryTooCoarse";
    case ErrorCode::EmptyNodeSet: return "EmptyNodeSet";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::InsufficientStencil: return "InsufficientStencil";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::MissingWeights: return "MissingWeights";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Breakdown: return "Breakdown";
    case ErrorCode::TooLargeForDense: return "TooLargeForDense";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace rbffd
