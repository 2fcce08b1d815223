#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfid {

/// Every failure the library reports carries one of these codes.
enum class ErrorCode {
    // construction / usage
    InvalidArgument,
    UnknownPhenomenon,
    DuplicateModel,
    UnknownModel,
    ParseError,
    BoundsError,
    IncompatibleParameter,
    ParameterTypeMismatch,
    NonPositiveDimension,
    OutOfDomain,
    MissingShearData,
    // model-level
    PreconditionViolation,
    MissingParameter,
    NoValidModel,
    ZeroDamping,
    NoSettling,
    TipOverDuringSettling,
    NeverFails,
    // numerical
    StepUnderflow,
    StepBudgetExhausted,
    NoSignChange,
    IterationBudget,
    NonConvergence,
    NonFinite,
};

enum class ErrorCategory { Usage, Model, Numerical };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// ParseError that remembers the offending character offset.
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& message)
        : Error(ErrorCode::ParseError, message + " at position " + std::to_string(position)),
          position_(position) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace mfid
