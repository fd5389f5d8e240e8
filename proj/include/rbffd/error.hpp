// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace rbffd {

/// Failure categories shared by every module. The numeric values are part of
/// the C API (see rbffd.h) and must stay stable.
enum class ErrorCode : int {
  InvalidArgument = 1,
  BoundaryTooCoarse = 2,
  EmptyNodeSet = 3,
  KTooLarge = 4,
  InsufficientStencil = 5,
  SingularSystem = 6,
  MissingWeights = 7,
  NotConverged = 8,
  Breakdown = 9,
  TooLargeForDense = 10,
  SingularMatrix = 11,
  EmptyInterior = 12,
  TooShort = 13,
  TooFewPoints = 14,
  Io = 15,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rbffd
