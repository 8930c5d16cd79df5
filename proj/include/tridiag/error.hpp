#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace tridiag {

enum class ErrorCode {
    DegenerateCoupling,
    DimensionTooSmall,
    DomainError,
    BranchPole,
    ZeroDenominator,
    RootCountAnomaly,
    NoConvergence,
    UnitCircleCollapse,
    DegenerateRoot,
    DiscriminantCollapse,
    DimensionMismatch,
    NotDecentralized,
    StepSizeTooLarge,
    NotApplicable,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every module. `details` carries machine-readable
/// diagnostics (counts, offending values) and is echoed by the CLI on stderr.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, nlohmann::json details = nlohmann::json::object())
        : std::runtime_error(message), code_(code), details_(std::move(details)) {}

    ErrorCode code() const noexcept { return code_; }
    const nlohmann::json& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    nlohmann::json details_;
};

}  // namespace tridiag
