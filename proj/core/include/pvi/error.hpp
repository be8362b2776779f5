#ifndef PVI_ERROR_HPP
#define PVI_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvi {

/// Failure categories raised by the numerical routines.
enum class ErrorKind {
    InvalidArgument,
    PoleAtLatticePoint,
    PoleAtThetaZero,
    NonConvergent,
    StepUnderflow,
    PointAtInfinity,
    NoConvergence,
    InconsistentTau,
    InsufficientSamples,
    BranchJump,
    PoleHit,
    PoleApproach,
    InconsistentContext,
    PatternMismatch,
    InvalidPath,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace pvi

#endif
