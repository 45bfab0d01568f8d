#include "flrdt/error.hpp"

namespace flrdt {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::BoundaryViolation: return "BoundaryViolation";
    case ErrorCode::NonpositiveExponent: return "NonpositiveExponent";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ExponentUnderflow: return "ExponentUnderflow";
    case ErrorCode::NonpositiveAux: return "NonpositiveAux";
    case ErrorCode::QuadratureOrderTooLow: return "QuadratureOrderTooLow";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::StepOutOfDomain: return "StepOutOfDomain";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::BadBracket: return "BadBracket";
    case ErrorCode::NoisyBoundary: return "NoisyBoundary";
    case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::optional<int> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

} // namespace flrdt
