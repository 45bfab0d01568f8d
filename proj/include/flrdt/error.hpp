#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flrdt {

enum class ErrorCode {
    MonotonicityViolation,
    BoundaryViolation,
    NonpositiveExponent,
    NegativeRadicand,
    DimensionMismatch,
    UnsupportedFamily,
    NonFiniteInput,
    ExponentUnderflow,
    NonpositiveAux,
    QuadratureOrderTooLow,
    OverflowGuard,
    StepOutOfDomain,
    BracketFailure,
    BadBracket,
    NoisyBoundary,
    SizeLimitExceeded,
    NoCrossing,
    InvalidArgument,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<int> index = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    // Offending entry for vector-valued inputs, when one is identifiable.
    std::optional<int> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<int> index_;
};

} // namespace flrdt
