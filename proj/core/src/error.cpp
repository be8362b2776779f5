#include <pvi/error.hpp>

namespace pvi {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::PoleAtLatticePoint: return "PoleAtLatticePoint";
    case ErrorKind::PoleAtThetaZero: return "PoleAtThetaZero";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::PointAtInfinity: return "PointAtInfinity";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InconsistentTau: return "InconsistentTau";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::BranchJump: return "BranchJump";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::PoleApproach: return "PoleApproach";
    case ErrorKind::InconsistentContext: return "InconsistentContext";
    case ErrorKind::PatternMismatch: return "PatternMismatch";
    case ErrorKind::InvalidPath: return "InvalidPath";
    }
    return "Unknown";
}

} // namespace pvi
