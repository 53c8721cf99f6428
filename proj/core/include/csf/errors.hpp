#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace csf {

enum class ErrorCode {
  SpecMismatch,
  DimensionMismatch,
  NotPositive,
  NotInvertible,
  NotAFrame,
  NotUnitalVector,
  NotProjection,
  NotInCorner,
  NotInvertibleInCorner,
  NotCornerUnitary,
  NotParseval,
  NotCompatiblePartialIsometry,
  NotEquivalent,
  NotLeftInvertible,
  IncompatibleRanges,
  InconsistentIndexing,
  DegenerateInnerFrame,
  InvalidArgument,
  ParseError,
};

const char* to_string(ErrorCode code);

// Single exception type for all domain errors. `diagnostic` carries the
// quantity that triggered the failure when one exists (smallest eigenvalue,
// residual norm, ...), NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        double diagnostic = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        diagnostic_(diagnostic) {}

  ErrorCode code() const { return code_; }
  double diagnostic() const { return diagnostic_; }

 private:
  ErrorCode code_;
  double diagnostic_;
};

}  // namespace csf
