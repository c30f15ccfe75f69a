#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowsched {

using JobId = std::int64_t;

/// Failure categories raised by the library. Every thrown flowsched::Error
/// carries exactly one of these.
enum class Errc {
    DuplicateId,
    NonPositiveField,
    DistortionViolated,
    EmptyInstance,
    InvalidBase,
    InvalidMu,
    InvalidRho,
    InvalidSpec,
    ParseError,
    PolicySelectedUnknownJob,
    PolicyIdleWhilePending,
    IncompleteRun,
    UnknownJob,
    DuplicateRelease,
    CompletedNonTop,
    InternalInconsistency,
    WeightedInstance,
    TooLarge,
    NonIntegerData,
    VictimWeighted,
    WrongPolicyKind,
    SeriesMismatch,
    ZeroOpt,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::optional<JobId> job = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
        , job_(job) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }
    [[nodiscard]] std::optional<JobId> job() const noexcept { return job_; }

private:
    Errc code_;
    std::optional<JobId> job_;
};

} // namespace flowsched
