#ifndef PVI_PARAMS_HPP
#define PVI_PARAMS_HPP

// Parameter points of the sixth Painleve equation in three coordinate systems:
//   classical (alpha, beta, gamma, delta),
//   alphas    (alpha_0..alpha_3) = (alpha, -beta, gamma, 1/2 - delta),
//   avec      (a_0..a_3) with a_i^2 = 2 alpha_i.

#include <pvi/types.hpp>

#include <string_view>
#include <vector>

namespace pvi {

enum class ParamRep { Classical, Alphas, AVec };

std::string_view to_string(ParamRep rep) noexcept;
/// Accepts "classical", "alphas", "avec". Throws InvalidArgument otherwise.
ParamRep param_rep_from_string(std::string_view name);

class PainleveParams {
public:
    /// All four alpha_i zero.
    PainleveParams();

    static PainleveParams from_classical(const Quad& c);
    static PainleveParams from_alphas(const Quad& al);
    /// The given a-vector is kept verbatim, signs included.
    static PainleveParams from_avec(const Quad& a);
    static PainleveParams from(ParamRep rep, const Quad& values);

    const Quad& classical() const noexcept { return classical_; }
    const Quad& alphas() const noexcept { return alphas_; }
    const Quad& avec() const noexcept { return avec_; }
    const Quad& get(ParamRep rep) const noexcept;

    /// Representation the point was built from.
    ParamRep source() const noexcept { return source_; }

    /// +1 where avec[i] is the principal root of 2 alpha_i, -1 otherwise.
    const std::array<int, 4>& avec_signs() const noexcept { return signs_; }

    bool all_alphas_zero(double tol = 0.0) const noexcept;

private:
    void fill_signs();

    Quad classical_{};
    Quad alphas_{};
    Quad avec_{};
    std::array<int, 4> signs_{1, 1, 1, 1};
    ParamRep source_ = ParamRep::Alphas;
};

/// Populates every representation from the source one.
PainleveParams params_convert(ParamRep source, const Quad& values);

/// The point with the given representation replaced; identity if `target`
/// equals the source. Present for symmetry with the other representations.
PainleveParams params_convert(const PainleveParams& p, ParamRep target);

/// Torsion shift zeta = r + s tau with rational r, s and its coefficient.
struct TorsionTerm {
    double r = 0.0;
    double s = 0.0;
    cplx alpha{};

    cplx zeta(cplx tau) const noexcept { return r + s * tau; }
};

/// Finitely many torsion shifts with coefficients; the four half-period
/// terms reproduce the ordinary equation.
struct GeneralizedParams {
    std::vector<TorsionTerm> terms;

    static GeneralizedParams from(const PainleveParams& p);
    /// Throws InvalidArgument if two shifts agree modulo Z + Z tau.
    void validate() const;
};

} // namespace pvi

#endif
