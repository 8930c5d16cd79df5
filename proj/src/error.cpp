#include "tridiag/error.hpp"

namespace tridiag {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateCoupling: return "DegenerateCoupling";
        case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::BranchPole: return "BranchPole";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::RootCountAnomaly: return "RootCountAnomaly";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::UnitCircleCollapse: return "UnitCircleCollapse";
        case ErrorCode::DegenerateRoot: return "DegenerateRoot";
        case ErrorCode::DiscriminantCollapse: return "DiscriminantCollapse";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotDecentralized: return "NotDecentralized";
        case ErrorCode::StepSizeTooLarge: return "StepSizeTooLarge";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

}  // namespace tridiag
