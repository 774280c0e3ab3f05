#pragma once

#include <stdexcept>
#include <string>

namespace operlab {

enum class ErrorKind {
    SingularLinearSystem,
    NoPolynomialSolution,
    NonConvergence,
    DegenerateConfiguration,
    CollisionDetected,
    DegeneratePartition,
    InvalidResidue,
    SumRuleViolation,
    PoleHit,
    UnsupportedPoleType,
    DegenerateParameters,
    ResonantParameters,
    TruncationInsufficient,
    PoleProximity,
    StepFailure,
    AnchorTooSmall,
    DegenerateBasis,
    PhaseJump,
    MissedZeroSuspected,
    NonIntegerRootNumber,
    FitUnstable,
    QuadratureFailure,
    LengthMismatch,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; the kind tag drives CLI exit codes
// and lets tests check which failure fired.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    // The description without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace operlab
