#ifndef PVI_DYNAMICS_HPP
#define PVI_DYNAMICS_HPP

// The sixth Painleve equation in three charts and an adaptive integrator for
// complex base paths.
//
//   elliptic   (z, y; tau):   dz/dtau = y,  dy/dtau = (2 pi i)^{-2} sum_j alpha_j wp_z(z + T_j/2, tau)
//   classical  (X, X'; t):    the classical second-order equation in X(t)
//   algebraic  (U, X, Y; t):  dX/dt = 2UY/(t(t-1)), dU/dt as below, Y^2 = X(X-1)(X-t)
//
// The algebraic chart is tied to the elliptic one through the uniformization
// and U = (2 pi i y + theta_z/theta) / (2 b), b^2 = e2 - e1.

#include <pvi/elliptic_core.hpp>
#include <pvi/params.hpp>
#include <pvi/uniformization.hpp>

#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace pvi {

enum class Chart { Elliptic, Classical, Algebraic };

std::string_view to_string(Chart chart) noexcept;
/// Accepts "elliptic", "classical", "algebraic".
Chart chart_from_string(std::string_view name);
/// Number of state components: 2, 2, 3.
int chart_dimension(Chart chart) noexcept;

struct EllipticState {
    cplx z;
    cplx y;
    ModularParameter tau;
};

struct ClassicalState {
    cplx X;
    cplx Xdot;
    cplx t;
};

struct AlgebraicState {
    cplx U, X, Y, t;

    cplx curve_residual() const noexcept { return Y * Y - X * (X - 1.0) * (X - t); }
};

using AnyState = std::variant<EllipticState, ClassicalState, AlgebraicState>;

Chart chart_of(const AnyState& s) noexcept;

/// One trajectory sample. The base is tau (elliptic) or t (other charts);
/// state holds (z, y), (X, X') or (U, X, Y).
struct Sample {
    cplx base;
    std::array<cplx, 3> state{};
    /// Accumulated local error estimate since the previous sample.
    double err = 0.0;
};

struct Trajectory {
    Chart chart = Chart::Elliptic;
    PainleveParams params;
    /// Non-empty only for trajectories of the torsion-shift generalization.
    std::vector<TorsionTerm> generalized;
    std::vector<Sample> samples;

    std::size_t size() const noexcept { return samples.size(); }
    EllipticState elliptic(std::size_t i) const;
    ClassicalState classical(std::size_t i) const;
    AlgebraicState algebraic(std::size_t i) const;
    std::vector<cplx> bases() const;
    std::vector<cplx> component(int k) const;
};

/// Polyline in the base (tau for the elliptic chart, t otherwise).
struct PathSpec {
    std::vector<cplx> vertices;

    double length() const noexcept;
    static PathSpec segment(cplx a, cplx b) { return {{a, b}}; }
};

struct IntegratorConfig {
    double rtol = 1e-12;
    double atol = 1e-13;
    double max_step = 0.02;
    double initial_step = 1e-3;
    /// Distance to chart singularities below which integration aborts.
    double pole_guard = 1e-6;
    /// Output spacing in arc length along the path.
    double sample_spacing = 0.005;
    long max_steps = 2'000'000;
    EvalOptions eval{};

    void validate() const;
};

/// Integration stopped near a chart singularity. Carries the samples produced
/// before the abort and the base point where it happened.
class PoleApproachError : public Error {
public:
    PoleApproachError(const std::string& what, Trajectory partial, cplx location)
        : Error(ErrorKind::PoleApproach, what), partial_(std::move(partial)), location_(location)
    {
    }

    const Trajectory& partial() const noexcept { return partial_; }
    cplx location() const noexcept { return location_; }

private:
    Trajectory partial_;
    cplx location_;
};

/// d^2z/dtau^2. Throws PoleHit if z + T_j/2 is within guard of the lattice
/// for some j with alpha_j != 0.
cplx rhs_elliptic(const EllipticState& s, const PainleveParams& p, const EvalOptions& opts = {});
cplx rhs_elliptic(cplx z, const EllipticLattice& lattice, const PainleveParams& p, double guard = 0.0);
cplx rhs_elliptic(const EllipticState& s, const GeneralizedParams& p, const EvalOptions& opts = {});

/// d^2X/dt^2 of the classical equation.
cplx rhs_classical(const ClassicalState& s, const PainleveParams& p, double guard = 0.0);

struct AlgebraicRhs {
    cplx dX, dU, dY;
};

/// dY/dt comes from differentiating the curve equation.
AlgebraicRhs rhs_algebraic(const AlgebraicState& s, const PainleveParams& p, double guard = 0.0);

/// H = y^2/2 - (2 pi i)^{-2} sum_j alpha_j wp(z + T_j/2, tau).
cplx hamiltonian(const EllipticState& s, const PainleveParams& p, const EvalOptions& opts = {});

Trajectory integrate(const EllipticState& init, const PathSpec& path, const PainleveParams& p,
                     const IntegratorConfig& cfg = {});
Trajectory integrate(const EllipticState& init, const PathSpec& path, const GeneralizedParams& p,
                     const IntegratorConfig& cfg = {});
Trajectory integrate(const ClassicalState& init, const PathSpec& path, const PainleveParams& p,
                     const IntegratorConfig& cfg = {});
Trajectory integrate(const AlgebraicState& init, const PathSpec& path, const PainleveParams& p,
                     const IntegratorConfig& cfg = {});
Trajectory integrate(const AnyState& init, const PathSpec& path, const PainleveParams& p,
                     const IntegratorConfig& cfg = {});

/// Side data for chart conversions.
struct ChartContext {
    /// Elliptic source: must match the state's tau if given. Elliptic target:
    /// seed for the lambda inversion.
    std::optional<ModularParameter> tau;
    /// Square root of e2 - e1; principal at the relevant tau when absent.
    std::optional<BranchChoice> branch;
    /// Seed for the preimage z; the result is its nearest lattice translate.
    std::optional<cplx> z_seed;
    /// Classical source: Y is the root of X(X-1)(X-t) nearest this value.
    std::optional<cplx> y_reference;
    EvalOptions eval{};
    double consistency = 1e-8;
};

AlgebraicState to_algebraic(const EllipticState& s, const BranchChoice& branch, const EvalOptions& opts = {});
EllipticState to_elliptic(const AlgebraicState& s, const ModularParameter& tau, const BranchChoice& branch,
                          std::optional<cplx> z_seed = std::nullopt, const EvalOptions& opts = {});
ClassicalState to_classical(const AlgebraicState& s);
AlgebraicState to_algebraic(const ClassicalState& s, std::optional<cplx> y_reference = std::nullopt);

/// Any chart to any chart. Throws InconsistentContext when the context
/// contradicts the state and PoleHit on chart boundaries.
AnyState convert_state(const AnyState& s, Chart target, const ChartContext& ctx = {});

/// Converts every sample, continuing tau, the branch, the preimage and the
/// sign of Y from one sample to the next.
Trajectory convert_trajectory(const Trajectory& tr, Chart target, const ChartContext& ctx = {});

struct CanonicalLift {
    EllipticState elliptic;
    AlgebraicState algebraic;
};

/// The section z = e tau + f, y = e in both charts. Throws PoleHit if z is
/// within guard of a half-period or lattice point.
CanonicalLift canonical_lift(double e, double f, const ModularParameter& tau,
                             std::optional<BranchChoice> branch = std::nullopt, const EvalOptions& opts = {},
                             double guard = 1e-6);

/// Largest deviation of a sampled trajectory from its equation, with
/// derivatives taken by 7-point finite differences on the samples. Samples
/// within three of either end are skipped.
double rhs_residual(const Trajectory& tr, const PainleveParams& p, const EvalOptions& opts = {});
double rhs_residual(const Trajectory& tr, const GeneralizedParams& p, const EvalOptions& opts = {});

} // namespace pvi

#endif
