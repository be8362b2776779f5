#ifndef PVI_PICARD_FUCHS_HPP
#define PVI_PICARD_FUCHS_HPP

// The Picard-Fuchs operator L_t = t(1-t) d^2/dt^2 + (1-2t) d/dt - 1/4 of the
// Legendre family, its period solutions, and the mu-equation residual
//
//   t(1-t) L_t A - [alpha Y + beta t Y/X^2 + gamma (t-1) Y/(X-1)^2 + (delta - 1/2) t(t-1) Y/(X-t)^2]
//
// with A(t) the Abelian integral of dX/Y up to the solution point (X(t), Y(t)).

#include <pvi/dynamics.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace pvi {

struct SampledFunction {
    std::vector<cplx> t;
    std::vector<cplx> values;

    /// Throws InsufficientSamples for fewer than 5 points or repeated nodes.
    void validate() const;
};

/// L_t f at `at` from the samples, with 5-point differences on the nodes
/// nearest `at`. `at` must have two nodes on either side in sample order.
cplx apply_lt(const SampledFunction& f, cplx at);

/// L_t f at `at` for a callable f, 5-point central differences with step h
/// and one Richardson refinement.
cplx apply_lt(const std::function<cplx(cplx)>& f, cplx at, cplx h = 1e-3);

struct Periods {
    cplx pi1, pi2;
    ModularParameter tau;
    BranchChoice branch;
};

/// Pi1 = 2b, Pi2 = tau(t) Pi1 with tau(t) from invert_lambda. The branch is
/// continued from `branch` when given, principal otherwise.
Periods period_functions(cplx t, const ModularParameter& tau_seed, std::optional<BranchChoice> branch = std::nullopt,
                         const EvalOptions& opts = {});

/// Periods near a base point, always continued from the same reference tau
/// and branch so that nearby evaluations land on one sheet.
class PeriodContinuation {
public:
    PeriodContinuation(cplx t0, const ModularParameter& tau_seed, std::optional<BranchChoice> branch = std::nullopt,
                       const EvalOptions& opts = {});

    Periods at(cplx t) const;
    const Periods& reference() const noexcept { return ref_; }

private:
    Periods ref_;
    EvalOptions opts_;
};

/// Per-sample data of a solution viewed on the Legendre family.
struct AbelianSample {
    cplx t, X, Y;
    ModularParameter tau;
    BranchChoice branch;
    cplx z; ///< continued preimage; A = 2 b z
    cplx A;
};

/// Continues tau, the branch and the preimage z along the samples of a
/// trajectory in any chart. Adjacent preimages are unwrapped by the lattice
/// translate nearest the previous one; a remaining jump above a quarter of the
/// shortest period raises BranchJump.
std::vector<AbelianSample> abelian_track(const Trajectory& tr, const EvalOptions& opts = {});

/// The residual at the sample nearest `at` (a base value of the trajectory's
/// own chart). Throws InsufficientSamples within 3 samples of either end.
cplx mu_residual(const Trajectory& tr, const PainleveParams& p, cplx at, const EvalOptions& opts = {});

/// Largest |residual| over all interior samples.
double max_mu_residual(const Trajectory& tr, const PainleveParams& p, const EvalOptions& opts = {});

/// Recomputes the raw mu-expression with the relative differential scaled by
/// g(t) and the second-order symbol scaled by f(t), the operator being rebuilt
/// from the scaled periods. Returns raw(f, g)/(f g) - raw(1, 1) at the sample
/// nearest `at`.
cplx mu_invariant(const Trajectory& tr, const std::function<cplx(cplx)>& g, const std::function<cplx(cplx)>& f,
                  cplx at, const EvalOptions& opts = {});

} // namespace pvi

#endif
