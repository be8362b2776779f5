#ifndef PVI_SYMMETRY_HPP
#define PVI_SYMMETRY_HPP

// Symmetries of the sixth Painleve equation:
//   - the lift of Gamma(2) x Z^2 to the elliptic chart,
//   - translation of the zero section by a half-period,
//   - the Landin (period doubling) transform,
//   - the affine group W on the a-vector and a solvability classification,
//   - Okamoto's observables p, h, the flow derivation D and the shift of h.

#include <pvi/dynamics.hpp>

#include <functional>
#include <string_view>
#include <vector>

namespace pvi {

/// (gamma, v) acting as z -> gamma . (z + m tau + n). Gamma is in Gamma(2).
class ModularElement {
public:
    /// Throws InvalidArgument unless ad - bc = 1, a, d odd and b, c even.
    ModularElement(long a, long b, long c, long d, long m = 0, long n = 0);

    static ModularElement identity() { return {1, 0, 0, 1, 0, 0}; }
    static ModularElement shift(long m, long n) { return {1, 0, 0, 1, m, n}; }

    long a() const noexcept { return a_; }
    long b() const noexcept { return b_; }
    long c() const noexcept { return c_; }
    long d() const noexcept { return d_; }
    long m() const noexcept { return m_; }
    long n() const noexcept { return n_; }

    /// act(g1 * g2) = act(g1) o act(g2).
    ModularElement operator*(const ModularElement& o) const;
    ModularElement inverse() const;
    bool operator==(const ModularElement& o) const = default;

private:
    long a_, b_, c_, d_, m_, n_;
};

/// Shift (y + m, z + m tau + n, tau) followed by
/// (y (c tau + d) - c z, z / (c tau + d), (a tau + b)/(c tau + d)).
EllipticState gamma2_act(const ModularElement& g, const EllipticState& s);

/// Image of every sample. Parameters are unchanged: Gamma(2) fixes each
/// half-period class.
Trajectory gamma2_act(const ModularElement& g, const Trajectory& tr);

struct ShiftedSection {
    EllipticState state;
    PainleveParams params;
};

/// z -> z + T_i/2, y -> y + d(T_i/2)/dtau; alpha_k -> alpha_{k xor i}.
ShiftedSection shift_zero_section(const HalfPeriodIndex& i, const EllipticState& s, const PainleveParams& p);
Trajectory shift_zero_section(const HalfPeriodIndex& i, const Trajectory& tr);

enum class LandinDirection { Forward, Inverse };

std::string_view to_string(LandinDirection d) noexcept;

/// Forward: (a0, a1, a0, a1) -> (4 a0, 4 a1, 0, 0) on alphas. Inverse undoes
/// it. Throws PatternMismatch when the alphas do not have the source shape.
PainleveParams landin(const PainleveParams& p, LandinDirection dir = LandinDirection::Forward, double tol = 1e-12);

struct LandinResult {
    Trajectory trajectory;
    PainleveParams params;
    /// Base rescaling applied: new base = scale * old base (1/2 or 2).
    double scale = 0.5;
    /// rhs_residual of the image against params.
    double residual = 0.0;
    /// Residual of the other rescaling, kept for the report.
    double rejected_residual = 0.0;
};

/// Maps an elliptic trajectory through the Landin transform. Both base
/// rescalings are tried; the one with the smaller residual is returned.
LandinResult landin_map(const Trajectory& tr, LandinDirection dir = LandinDirection::Forward,
                        const EvalOptions& opts = {});

/// wp_z(z, tau/2) - wp_z(z, tau) - wp_z(z + tau/2, tau). Throws PoleHit if
/// z is within the pole guard of the lattice Z + Z tau/2.
cplx landin_identity_residual(cplx z, const ModularParameter& tau, const EvalOptions& opts = {});

/// (w . a)_i = eps_i a_{perm(i)} + shift_i, sum of shifts even.
struct WElement {
    std::array<int, 4> eps{1, 1, 1, 1};
    std::array<int, 4> perm{0, 1, 2, 3};
    std::array<long, 4> shift{0, 0, 0, 0};

    /// Throws InvalidArgument on bad signs, a non-permutation or odd shift sum.
    void validate() const;

    static WElement identity() { return {}; }
    /// w1 * w2 acts as w1 o w2.
    WElement operator*(const WElement& o) const;
    WElement inverse() const;
    bool operator==(const WElement& o) const = default;
};

Quad w_act(const WElement& w, const Quad& a);

enum class SolvabilityTag { ClassicalGeneral, OneDimFamily, HypergeometricHyperplane, Unknown };

std::string_view to_string(SolvabilityTag t) noexcept;

struct WitnessStep {
    enum class Kind { W, Landin, LandinInverse };
    Kind kind = Kind::W;
    WElement w{};
};

std::string_view to_string(WitnessStep::Kind k) noexcept;

/// Landin moves on a-vectors: (a0, a1, a0, a1) <-> (2 a0, 2 a1, 0, 0).
Quad landin_avec(const Quad& a, LandinDirection dir, double tol = 1e-9);

struct SolvabilityClass {
    SolvabilityTag tag = SolvabilityTag::Unknown;
    /// Steps taking the input to base_point (to the hyperplane for the
    /// hypergeometric tag). Empty for Unknown.
    std::vector<WitnessStep> witness;
    Quad base_point{};

    /// Applies the witness to a and checks the claimed endpoint.
    bool replay(const Quad& a, double tol = 1e-9) const;
};

/// Bounded search: canonical form under W, then Landin moves to depth 2.
SolvabilityClass classify(const Quad& a, double tol = 1e-9);

/// p = U/Y + (a1/X + a2/(X-1) + (a3-1)/(X-t))/2.
cplx okamoto_p(const AlgebraicState& s, const Quad& a);

/// Okamoto's auxiliary Hamiltonian in (U, X, t).
cplx okamoto_h(const AlgebraicState& s, const Quad& a);

using Observable = std::function<cplx(const AlgebraicState&)>;

/// The flow vector field applied to f by finite differences in (t, X, U);
/// Y follows the curve, continued from s.Y.
cplx okamoto_D(const Observable& f, const AlgebraicState& s, const Quad& a);

struct OkamotoShift {
    cplx h;
    Quad a;
};

/// Image of the value h under the shift a -> a + e_0 + e_3.
OkamotoShift okamoto_shift_h(cplx h_value, const AlgebraicState& s, const Quad& a);

} // namespace pvi

#endif
