#include <pvi/params.hpp>

#include <pvi/error.hpp>

#include <cmath>
#include <string>

namespace pvi {

std::string_view to_string(ParamRep rep) noexcept
{
    switch (rep) {
    case ParamRep::Classical: return "classical";
    case ParamRep::Alphas: return "alphas";
    case ParamRep::AVec: return "avec";
    }
    return "alphas";
}

ParamRep param_rep_from_string(std::string_view name)
{
    if (name == "classical")
        return ParamRep::Classical;
    if (name == "alphas")
        return ParamRep::Alphas;
    if (name == "avec")
        return ParamRep::AVec;
    throw Error(ErrorKind::InvalidArgument, "unknown parameter representation '" + std::string(name) + "'");
}

PainleveParams::PainleveParams() { classical_[3] = 0.5; }

PainleveParams PainleveParams::from_classical(const Quad& c)
{
    PainleveParams p = from_alphas({c[0], -c[1], c[2], 0.5 - c[3]});
    p.classical_ = c;
    p.source_ = ParamRep::Classical;
    return p;
}

PainleveParams PainleveParams::from_alphas(const Quad& al)
{
    PainleveParams p;
    p.alphas_ = al;
    p.classical_ = {al[0], -al[1], al[2], 0.5 - al[3]};
    for (int i = 0; i < 4; ++i)
        p.avec_[i] = std::sqrt(2.0 * al[i]);
    p.signs_ = {1, 1, 1, 1};
    p.source_ = ParamRep::Alphas;
    return p;
}

PainleveParams PainleveParams::from_avec(const Quad& a)
{
    Quad al;
    for (int i = 0; i < 4; ++i)
        al[i] = 0.5 * a[i] * a[i];
    PainleveParams p = from_alphas(al);
    p.avec_ = a;
    p.source_ = ParamRep::AVec;
    p.fill_signs();
    return p;
}

PainleveParams PainleveParams::from(ParamRep rep, const Quad& values)
{
    switch (rep) {
    case ParamRep::Classical: return from_classical(values);
    case ParamRep::Alphas: return from_alphas(values);
    case ParamRep::AVec: return from_avec(values);
    }
    return from_alphas(values);
}

void PainleveParams::fill_signs()
{
    for (int i = 0; i < 4; ++i) {
        const cplx principal = std::sqrt(2.0 * alphas_[i]);
        signs_[i] = std::abs(avec_[i] - principal) <= std::abs(avec_[i] + principal) ? 1 : -1;
    }
}

const Quad& PainleveParams::get(ParamRep rep) const noexcept
{
    switch (rep) {
    case ParamRep::Classical: return classical_;
    case ParamRep::Alphas: return alphas_;
    case ParamRep::AVec: return avec_;
    }
    return alphas_;
}

bool PainleveParams::all_alphas_zero(double tol) const noexcept
{
    for (const cplx& a : alphas_)
        if (std::abs(a) > tol)
            return false;
    return true;
}

PainleveParams params_convert(ParamRep source, const Quad& values) { return PainleveParams::from(source, values); }

PainleveParams params_convert(const PainleveParams& p, ParamRep target)
{
    return PainleveParams::from(target, p.get(target));
}

GeneralizedParams GeneralizedParams::from(const PainleveParams& p)
{
    GeneralizedParams g;
    const double r[4] = {0.0, 0.5, 0.0, 0.5};
    const double s[4] = {0.0, 0.0, 0.5, 0.5};
    for (int i = 0; i < 4; ++i)
        g.terms.push_back({r[i], s[i], p.alphas()[i]});
    return g;
}

void GeneralizedParams::validate() const
{
    auto frac = [](double x) { return x - std::floor(x); };
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            const double dr = frac(terms[i].r - terms[j].r), ds = frac(terms[i].s - terms[j].s);
            if ((dr < 1e-12 || dr > 1 - 1e-12) && (ds < 1e-12 || ds > 1 - 1e-12))
                throw Error(ErrorKind::InvalidArgument, "torsion shifts must be distinct modulo the lattice");
        }
}

} // namespace pvi
