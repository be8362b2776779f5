#ifndef PVI_UNIFORMIZATION_HPP
#define PVI_UNIFORMIZATION_HPP

// The covering map from the torus C/(Z + Z tau) onto the Legendre curve
// Y^2 = X(X-1)(X-t):
//
//     X = (wp(z) - e1)/(e2 - e1),  Y = wp_z(z) / (2 b^3),  t = (e3 - e1)/(e2 - e1),
//
// where b is a chosen square root of e2 - e1. Half-periods 1/2, tau/2,
// (1+tau)/2 land on X = 0, 1, t; the origin lands on the point at infinity.

#include <pvi/elliptic_core.hpp>

#include <optional>

namespace pvi {

struct CurvePoint {
    cplx X, Y, t;

    /// Y^2 - X(X-1)(X-t).
    cplx curve_residual() const noexcept { return Y * Y - X * (X - 1.0) * (X - t); }
};

/// A chosen value b of (e2 - e1)^{1/2}.
class BranchChoice {
public:
    /// Throws InvalidArgument unless b^2 matches e2 - e1 at tau.
    BranchChoice(cplx sqrt_e21, const ModularParameter& tau, const EvalOptions& opts = {});

    /// Principal square root at tau.
    static BranchChoice principal(const ModularParameter& tau, const EvalOptions& opts = {});

    /// The root at new_tau nearest to this one. The caller supplies steps
    /// small enough that the nearest root is the continuation.
    BranchChoice continued_to(const ModularParameter& new_tau, const EvalOptions& opts = {}) const;

    /// The opposite root.
    BranchChoice flipped() const noexcept { return BranchChoice(-b_); }

    cplx value() const noexcept { return b_; }

private:
    explicit BranchChoice(cplx b) noexcept : b_(b) {}
    cplx b_;
};

/// The covering map. Throws PointAtInfinity within pole_guard of the lattice.
CurvePoint phi(cplx z, const EllipticLattice& lattice, const BranchChoice& branch);
CurvePoint phi(cplx z, const ModularParameter& tau, const BranchChoice& branch, const EvalOptions& opts = {});

/// t(tau) = (e3 - e1)/(e2 - e1).
cplx modular_lambda(const ModularParameter& tau, const EvalOptions& opts = {});

/// dt/dtau = -(i/pi)(e2 - e1) t (t - 1).
cplx modular_lambda_derivative(const ModularParameter& tau, const EvalOptions& opts = {});

/// Starting point for invert_lambda from the nome expansion of the modulus.
/// Lands on the branch with |Re tau| <= 1 and is accurate away from t = 0.
ModularParameter lambda_seed(cplx t);

struct InvertOptions {
    double tolerance = 1e-14; ///< on |lambda(tau) - t| / max(1, |t|)
    int max_iterations = 80;
    EvalOptions eval{};
};

/// Damped Newton iteration for lambda(tau) = t from the seed.
ModularParameter invert_lambda(cplx t, const ModularParameter& tau_seed, const InvertOptions& opts = {});

struct PreimageOptions {
    double tolerance = 1e-13;
    int max_iterations = 80;
    /// |lambda(tau) - p.t| above this raises InconsistentTau.
    double tau_consistency = 1e-8;
    EvalOptions eval{};
};

/// Solves phi(z) = p for z. Of the two preimages +-z mod lattice the one
/// matching the sign of Y is chosen; the result is the lattice translate
/// nearest z_seed. Without a seed a coarse grid search supplies one.
cplx z_from_point(const CurvePoint& p, const EllipticLattice& lattice, const BranchChoice& branch,
                  std::optional<cplx> z_seed = std::nullopt, const PreimageOptions& opts = {});
cplx z_from_point(const CurvePoint& p, const ModularParameter& tau, const BranchChoice& branch,
                  std::optional<cplx> z_seed = std::nullopt, const PreimageOptions& opts = {});

/// (dX/dz)/Y - 2b with dX/dz = wp_z/(e2 - e1).
cplx pullback_residual(cplx z, const ModularParameter& tau, const BranchChoice& branch,
                       const EvalOptions& opts = {});

/// Periods 2b and 2b tau of dX/Y.
struct PeriodPair {
    cplx pi1, pi2;
};
PeriodPair curve_periods(const ModularParameter& tau, const BranchChoice& branch);

/// Integral of dX/Y from the point at infinity to p, equal to 2b z for the
/// lattice-reduced preimage z; defined modulo the periods.
cplx abelian_integral(const CurvePoint& p, const ModularParameter& tau, const BranchChoice& branch,
                      std::optional<cplx> z_seed = std::nullopt, const PreimageOptions& opts = {});

} // namespace pvi

#endif
