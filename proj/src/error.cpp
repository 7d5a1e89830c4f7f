#include "fowler/error.hpp"

namespace fowler {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::InvalidComponentCount: return "InvalidComponentCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorCode::BadOrdering: return "BadOrdering";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::NonPositiveComponent: return "NonPositiveComponent";
    case ErrorCode::NecksizeOutOfRange: return "NecksizeOutOfRange";
    case ErrorCode::BracketNotFound: return "BracketNotFound";
    case ErrorCode::DegenerateOrbit: return "DegenerateOrbit";
    case ErrorCode::NoReturnDetected: return "NoReturnDetected";
    case ErrorCode::InsufficientSpan: return "InsufficientSpan";
    case ErrorCode::NoisyData: return "NoisyData";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace fowler
