#include "mfid/error.hpp"

namespace mfid {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnknownPhenomenon: return "UnknownPhenomenon";
        case ErrorCode::DuplicateModel: return "DuplicateModel";
        case ErrorCode::UnknownModel: return "UnknownModel";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::BoundsError: return "BoundsError";
        case ErrorCode::IncompatibleParameter: return "IncompatibleParameter";
        case ErrorCode::ParameterTypeMismatch: return "ParameterTypeMismatch";
        case ErrorCode::NonPositiveDimension: return "NonPositiveDimension";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::MissingShearData: return "MissingShearData";
        case ErrorCode::PreconditionViolation: return "PreconditionViolation";
        case ErrorCode::MissingParameter: return "MissingParameter";
        case ErrorCode::NoValidModel: return "NoValidModel";
        case ErrorCode::ZeroDamping: return "ZeroDamping";
        case ErrorCode::NoSettling: return "NoSettling";
        case ErrorCode::TipOverDuringSettling: return "TipOverDuringSettling";
        case ErrorCode::NeverFails: return "NeverFails";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::StepBudgetExhausted: return "StepBudgetExhausted";
        case ErrorCode::NoSignChange: return "NoSignChange";
        case ErrorCode::IterationBudget: return "IterationBudget";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::NonFinite: return "NonFinite";
    }
    return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::PreconditionViolation:
        case ErrorCode::MissingParameter:
        case ErrorCode::NoValidModel:
        case ErrorCode::ZeroDamping:
        case ErrorCode::NoSettling:
        case ErrorCode::TipOverDuringSettling:
        case ErrorCode::NeverFails:
            return ErrorCategory::Model;
        case ErrorCode::StepUnderflow:
        case ErrorCode::StepBudgetExhausted:
        case ErrorCode::NoSignChange:
        case ErrorCode::IterationBudget:
        case ErrorCode::NonConvergence:
        case ErrorCode::NonFinite:
            return ErrorCategory::Numerical;
        default:
            return ErrorCategory::Usage;
    }
}

}  // namespace mfid
