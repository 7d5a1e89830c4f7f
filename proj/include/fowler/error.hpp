#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fowler {

enum class ErrorCode {
  DimensionTooSmall,
  InvalidComponentCount,
  InvalidArgument,
  NonPositiveRadius,
  InvalidGrid,
  StencilOutOfDomain,
  BadOrdering,
  NonFiniteState,
  StepSizeUnderflow,
  EmptyTrajectory,
  NonPositiveComponent,
  NecksizeOutOfRange,
  BracketNotFound,
  DegenerateOrbit,
  NoReturnDetected,
  InsufficientSpan,
  NoisyData,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure surfaced by the library carries a machine-readable code; the
/// CLI prints it as `ERROR <CODE>: <detail>`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fowler
