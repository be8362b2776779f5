#ifndef PVI_ELLIPTIC_CORE_HPP
#define PVI_ELLIPTIC_CORE_HPP

// Weierstrass functions, the theta function, half-period values and the
// quasi-modular Eisenstein series for the lattice Z + Z tau.
//
// Every evaluation first reduces z into the fundamental cell
// {s + u tau : s, u in [-1/2, 1/2)}; the theta series is summed there and the
// quasi-periodicity factor is reapplied afterwards. The Weierstrass functions
// are obtained from the odd theta series
//
//     s(z) = sum_{n >= 0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z),  q = exp(i pi tau),
//
// which equals theta(z + (1+tau)/2) up to an exp-linear factor, through
// wp(z) = -(log s)''(z) + c(tau), with c(tau) fixed by the 1/z^2 Laurent
// behaviour at the origin.

#include <pvi/error.hpp>
#include <pvi/types.hpp>

#include <cstdint>
#include <vector>

namespace pvi {

/// Smallest imaginary part of tau accepted by the series evaluators.
inline constexpr double kMinImagTau = 0.05;

/// A point tau of the upper half-plane.
class ModularParameter {
public:
    explicit ModularParameter(cplx tau);

    cplx value() const noexcept { return tau_; }
    double imag() const noexcept { return tau_.imag(); }

private:
    cplx tau_;
};

/// Controls every special-function evaluation.
struct EvalOptions {
    /// Series are truncated once the tail bound drops below tolerance times
    /// the size of the leading term.
    double tolerance = 1e-17;
    int max_terms = 600;
    /// Distance (in lattice-reduced coordinates) below which a pole is reported.
    double pole_guard = 1e-8;

    void validate() const;
};

/// Index j of the half-period T_j / 2 with (T_0, ..., T_3) = (0, 1, tau, 1 + tau).
class HalfPeriodIndex {
public:
    explicit HalfPeriodIndex(int j);

    int value() const noexcept { return j_; }
    /// Coefficient of 1 in T_j.
    int one_bit() const noexcept { return j_ & 1; }
    /// Coefficient of tau in T_j.
    int tau_bit() const noexcept { return (j_ >> 1) & 1; }
    /// T_j / 2 for the given tau.
    cplx half_period(cplx tau) const noexcept
    {
        return 0.5 * (static_cast<double>(one_bit()) + static_cast<double>(tau_bit()) * tau);
    }

private:
    int j_;
};

struct LatticeReducedPoint {
    cplx z_reduced;
    int shift_m = 0; ///< coefficient of tau
    int shift_n = 0; ///< coefficient of 1
};

/// Writes z = z_reduced + m tau + n with z_reduced in the fundamental cell.
LatticeReducedPoint lattice_reduce(cplx z, const ModularParameter& tau);

/// Distance from z to the nearest lattice point, measured after reduction.
double lattice_distance(cplx z, const ModularParameter& tau);

struct HalfPeriodValues {
    cplx e1, e2, e3;

    /// e_i for i in {1, 2, 3}.
    cplx operator[](int i) const;
};

/// theta and its first partial derivatives at one point.
struct ThetaJet {
    cplx value;
    cplx dz;
    cplx dzz;
    cplx dtau;
};

/// Precomputed series coefficients for one tau. Cheap to copy; immutable.
class EllipticLattice {
public:
    explicit EllipticLattice(const ModularParameter& tau, const EvalOptions& opts = {});

    const ModularParameter& tau() const noexcept { return tau_; }
    const EvalOptions& options() const noexcept { return opts_; }

    cplx wp(cplx z) const;
    cplx wp_z(cplx z) const;

    struct WpPair {
        cplx wp;
        cplx wp_z;
    };
    WpPair wp_pair(cplx z) const;

    const HalfPeriodValues& half_period_values() const noexcept { return e_; }

    cplx theta(cplx z) const;
    ThetaJet theta_jet(cplx z) const;
    /// theta_z / theta; throws PoleAtThetaZero near (1 + tau)/2 mod lattice.
    cplx theta_logderiv(cplx z) const;

private:
    struct OddJet {
        cplx s, s1, s2, s3;
    };
    OddJet odd_jet(cplx z_reduced) const;
    ThetaJet theta_jet_reduced(cplx z_reduced) const;
    cplx reduce_checked(cplx z) const;

    ModularParameter tau_;
    EvalOptions opts_;
    std::vector<cplx> odd_coeffs_;   // (-1)^n q^{(n+1/2)^2}
    std::vector<cplx> theta_coeffs_; // q^{n^2}, n >= 1
    cplx laurent_constant_{};
    HalfPeriodValues e_{};
};

cplx wp(cplx z, const ModularParameter& tau, const EvalOptions& opts = {});
cplx wp_z(cplx z, const ModularParameter& tau, const EvalOptions& opts = {});

/// e_i = wp(T_i / 2); the three values sum to zero.
HalfPeriodValues half_period_values(const ModularParameter& tau, const EvalOptions& opts = {});

/// theta(z, tau) = sum_n exp(pi i n^2 tau + 2 pi i n z).
cplx theta(cplx z, const ModularParameter& tau, const EvalOptions& opts = {});
ThetaJet theta_jet(cplx z, const ModularParameter& tau, const EvalOptions& opts = {});

/// theta_z / theta.
cplx theta_logderiv(cplx z, const ModularParameter& tau, const EvalOptions& opts = {});

/// v(z, tau) = -(1 / 2 pi i) theta_z / theta; v(z + m tau + n) = v(z) + m.
cplx theta_v(cplx z, const ModularParameter& tau, const EvalOptions& opts = {});

/// Divisor sum sigma_1(n), the n-th q-coefficient of G2.
std::int64_t eisenstein_g2_coefficient(int n);

/// G2(tau) = -1/24 + sum_{n >= 1} sigma_1(n) exp(2 pi i n tau).
cplx eisenstein_g2(const ModularParameter& tau, const EvalOptions& opts = {});

/// theta_tau - theta_zz / (4 pi i), from term-wise differentiated series.
cplx heat_residual(cplx z, const ModularParameter& tau, const EvalOptions& opts = {});

/// Total tau-derivatives of e_1, e_2, e_3 with their error estimate.
struct HalfPeriodDerivatives {
    HalfPeriodValues values;
    double error_estimate = 0.0;
};

/// Richardson-extrapolated central differences (two levels). Throws
/// StepUnderflow when the estimated relative error exceeds max_relative_error.
HalfPeriodDerivatives half_period_derivatives(const ModularParameter& tau, const EvalOptions& opts = {},
                                              double max_relative_error = 1e-7);

/// prod_{i>j} (e_i - e_j)^2 / (e_1 e_2' - e_2 e_1')^2; equals -9 pi^2 for every tau.
cplx constant_c(const ModularParameter& tau, const EvalOptions& opts = {});

} // namespace pvi

#endif
