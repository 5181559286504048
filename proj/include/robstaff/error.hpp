#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robstaff {

enum class ErrorCode {
    kInvalidInput,
    kDimensionMismatch,
    kNonMonotoneAvailability,
    kNegativeParameter,
    kEmptyHorizon,
    kInfeasible,
    kUnbounded,
    kNumericFailure,
    kInfeasibleState,
    kConfigurationExplosion,
    kSplitInfeasible,
    kMultiPoolUnsupported,
    kParameterOutOfRange,
    kUnsupportedBase,
    kBudgetExceeded,
    kInsufficientDraws,
    kStateExplosion,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    // true for failures caused by bad user input rather than by a solver
    bool is_input_error() const noexcept;

private:
    ErrorCode code_;
};

}  // namespace robstaff
