#include "operlab/errors.hpp"

namespace operlab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::SingularLinearSystem: return "SingularLinearSystem";
    case ErrorKind::NoPolynomialSolution: return "NoPolynomialSolution";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::CollisionDetected: return "CollisionDetected";
    case ErrorKind::DegeneratePartition: return "DegeneratePartition";
    case ErrorKind::InvalidResidue: return "InvalidResidue";
    case ErrorKind::SumRuleViolation: return "SumRuleViolation";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::UnsupportedPoleType: return "UnsupportedPoleType";
    case ErrorKind::DegenerateParameters: return "DegenerateParameters";
    case ErrorKind::ResonantParameters: return "ResonantParameters";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::AnchorTooSmall: return "AnchorTooSmall";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::PhaseJump: return "PhaseJump";
    case ErrorKind::MissedZeroSuspected: return "MissedZeroSuspected";
    case ErrorKind::NonIntegerRootNumber: return "NonIntegerRootNumber";
    case ErrorKind::FitUnstable: return "FitUnstable";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace operlab
