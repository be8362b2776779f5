#ifndef PVI_FORMS_HPP
#define PVI_FORMS_HPP

// The Painleve 1-form Omega and 2-form omega in both charts.
//
// Elliptic chart, coordinates (y, z, tau):
//   omega = 2 pi i (dy^dz - y dy^dtau) + (2 pi i)^{-1} sum_j alpha_j wp_z(z + T_j/2) dz^dtau
//   Omega = 2 pi i (y dz - y^2/2 dtau) + dlog theta + 2 pi i G2 dtau
//           + (2 pi i)^{-1} sum_j alpha_j wp(z + T_j/2) dtau
//
// Algebraic chart, coordinates (U, X, t) with Y^2 = X(X-1)(X-t) dependent:
//   Omega = U dX/Y - U^2 dt/(t(t-1)) + Q dt/(2t(t-1)),
//   Q = alpha X - beta t/X - gamma (t-1)/(X-1) - delta t(t-1)/(X-t)
// in classical parameters, and omega = dOmega.

#include <pvi/dynamics.hpp>
#include <pvi/symmetry.hpp>

#include <array>

namespace pvi {

/// Conversion constant dtau -> 4 pi i (dz)^2 of the Kodaira-Spencer map.
inline constexpr cplx kKodairaSpencer{0.0, 4.0 * std::numbers::pi};

/// Components in (y, z, tau) for the elliptic chart and (U, X, t) for the
/// algebraic one.
struct TangentVector {
    Chart chart = Chart::Elliptic;
    std::array<cplx, 3> v{};

    static TangentVector elliptic(cplx dy, cplx dz, cplx dtau) { return {Chart::Elliptic, {dy, dz, dtau}}; }
    static TangentVector algebraic(cplx dU, cplx dX, cplx dt) { return {Chart::Algebraic, {dU, dX, dt}}; }

    /// Throws InvalidArgument on non-finite components or the classical chart.
    void validate() const;
};

using FormMatrix = std::array<std::array<cplx, 3>, 3>;
using Covector = std::array<cplx, 3>;

/// Antisymmetric coefficient matrix: omega = sum_{i<j} M[i][j] dx_i ^ dx_j.
/// Throws PoleHit near the poles of the coefficients.
FormMatrix omega_matrix(const EllipticState& s, const PainleveParams& p, const EvalOptions& opts = {});
FormMatrix omega_matrix(const AlgebraicState& s, const PainleveParams& p, double guard = 1e-10);

cplx omega_eval(const EllipticState& s, const TangentVector& v1, const TangentVector& v2, const PainleveParams& p,
                const EvalOptions& opts = {});
cplx omega_eval(const AlgebraicState& s, const TangentVector& v1, const TangentVector& v2, const PainleveParams& p);

/// Contraction of a 2-form matrix with two vectors.
cplx contract(const FormMatrix& m, const std::array<cplx, 3>& v1, const std::array<cplx, 3>& v2) noexcept;

/// Coefficients of Omega. include_g2 = false drops the 2 pi i G2 dtau term.
Covector omega_big_coeffs(const EllipticState& s, const PainleveParams& p, bool include_g2 = true,
                          const EvalOptions& opts = {});
Covector omega_big_coeffs(const AlgebraicState& s, const PainleveParams& p, double guard = 1e-10);

cplx omega_big_eval(const EllipticState& s, const TangentVector& v, const PainleveParams& p, bool include_g2 = true,
                    const EvalOptions& opts = {});
cplx omega_big_eval(const AlgebraicState& s, const TangentVector& v, const PainleveParams& p);

/// Omega_0 = 2 pi i (y dz - y^2/2 dtau) + dlog theta + (i / 4 pi) (log theta)_zz dtau.
Covector omega0_coeffs(const EllipticState& s, const EvalOptions& opts = {});
cplx omega0_eval(const EllipticState& s, const TangentVector& v, const EvalOptions& opts = {});

/// Omega(elliptic) - Omega(algebraic) pulled back along the uniformization
/// is g(tau) dtau with g = (2 pi i)^{-1} [(alpha_0 + alpha_1) e1 + alpha_2 e2 + (alpha_3 - 1/2) e3].
cplx omega_big_gauge(const ModularParameter& tau, const PainleveParams& p, const EvalOptions& opts = {});

/// Directional derivative of the chart map (y, z, tau) -> (U, X, t) along v,
/// by Richardson-extrapolated central differences.
TangentVector pushforward(const EllipticState& s, const TangentVector& v, const BranchChoice& branch,
                          const EvalOptions& opts = {}, double step = 1e-4);

/// Index pair of a coordinate plane: (0,1), (0,2), (1,2) in either chart.
enum class CoordinatePlane { First, Second, Third };

std::pair<int, int> plane_indices(CoordinatePlane plane) noexcept;

struct ExactnessOptions {
    double step = 1e-5;
    bool include_g2 = true;
    EvalOptions eval{};
};

/// dOmega on the plane, from the circulation of Omega around a square of side
/// `step` (one Richardson refinement with step/2), minus omega on the plane.
/// Throws StepUnderflow when the square does not fit in the chart.
cplx exactness_residual(const EllipticState& s, const PainleveParams& p, CoordinatePlane plane,
                        const ExactnessOptions& opts = {});
cplx exactness_residual(const AlgebraicState& s, const PainleveParams& p, CoordinatePlane plane,
                        const ExactnessOptions& opts = {});

/// d omega(e_y, e_z, e_tau) by central differences of the coefficients.
cplx closedness_residual(const EllipticState& s, const PainleveParams& p, const ExactnessOptions& opts = {});

/// max_ij |(J^T M(g s) J - M(s))_ij| with J the finite-difference Jacobian of
/// the action of g. The default step balances rounding against truncation for
/// the rational action.
double invariance_residual(const EllipticState& s, const PainleveParams& p, const ModularElement& g,
                           const EvalOptions& opts = {}, double step = 1e-3);

/// max_i |(J^T Omega(g s) - Omega(s))_i|.
double omega_big_invariance_residual(const EllipticState& s, const PainleveParams& p, const ModularElement& g,
                                     bool include_g2 = true, const EvalOptions& opts = {}, double step = 1e-3);

/// Max over interior samples of |omega(T, e_k)| with T the sampled tangent
/// (dy/dtau, dz/dtau, 1) or (dU/dt, dX/dt, 1). Classical trajectories are
/// converted to the algebraic chart first.
double null_foliation_residual(const Trajectory& tr, const PainleveParams& p, const EvalOptions& opts = {});

/// omega restricted to the tangent plane of D = {2 pi i y + theta_z/theta = 0}
/// over (z, tau); y is recomputed on D.
cplx divisor_restriction(cplx z, const ModularParameter& tau, const PainleveParams& p, const EvalOptions& opts = {});
/// Same in the algebraic chart at U = 0.
cplx divisor_restriction(cplx X, cplx t, const PainleveParams& p);

/// |omega^(0)(v1, v2) - d nu(v1, v2)| for vertical vectors, with
/// nu = (2 pi i y + theta_z/theta) dz and d nu from a circulation.
cplx vertical_part_residual(const EllipticState& s, const TangentVector& v1, const TangentVector& v2,
                            const EvalOptions& opts = {}, double step = 1e-5);

/// Laurent coefficients of kKodairaSpencer (2 pi i)^{-1} wp_z(w, tau) at w = 0,
/// w = z + T_j/2, from a 16-point DFT on |w| = radius.
struct LaurentFit {
    cplx cubic;     ///< w^-3
    cplx quadratic; ///< w^-2
    cplx simple;    ///< w^-1
};

LaurentFit omega_j_laurent(const HalfPeriodIndex& j, const ModularParameter& tau, double radius = 1e-2,
                           const EvalOptions& opts = {});

/// The cubic coefficient alone; equals -4.
cplx omega_j_residue(const HalfPeriodIndex& j, const ModularParameter& tau, const EvalOptions& opts = {});

} // namespace pvi

#endif
