#include <pvi/picard_fuchs.hpp>

#include <pvi/numeric.hpp>

#include <algorithm>
#include <cmath>

namespace pvi {

void SampledFunction::validate() const
{
    if (t.size() != values.size())
        throw Error(ErrorKind::InvalidArgument, "node and value counts differ");
    if (t.size() < 5)
        throw Error(ErrorKind::InsufficientSamples, "need at least 5 samples");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] == t[i - 1])
            throw Error(ErrorKind::InsufficientSamples, "sample nodes must be distinct");
}

namespace {

std::size_t nearest_index(const std::vector<cplx>& xs, cplx at)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs(xs[i] - at) < std::abs(xs[best] - at))
            best = i;
    return best;
}

struct Jet {
    cplx f, d1, d2;
};

Jet window_jet(const std::vector<cplx>& x, const std::vector<cplx>& v, std::size_t lo, std::size_t width, cplx at)
{
    const auto w = fornberg_weights(at, std::span<const cplx>(x.data() + lo, width), 2);
    Jet j{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < width; ++k) {
        j.f += w[0][k] * v[lo + k];
        j.d1 += w[1][k] * v[lo + k];
        j.d2 += w[2][k] * v[lo + k];
    }
    return j;
}

cplx lt_of(const Jet& j, cplx t) { return t * (1.0 - t) * j.d2 + (1.0 - 2.0 * t) * j.d1 - 0.25 * j.f; }

} // namespace

cplx apply_lt(const SampledFunction& f, cplx at)
{
    f.validate();
    const std::size_t i = nearest_index(f.t, at);
    if (i < 2 || i + 2 >= f.t.size())
        throw Error(ErrorKind::InsufficientSamples, "evaluation point is not interior to the sample window");
    return lt_of(window_jet(f.t, f.values, i - 2, 5, at), at);
}

cplx apply_lt(const std::function<cplx(cplx)>& f, cplx at, cplx h)
{
    const Derivatives2 d = central_derivatives(f, at, h);
    return lt_of({d.f, d.d1, d.d2}, at);
}

Periods period_functions(cplx t, const ModularParameter& tau_seed, std::optional<BranchChoice> branch,
                         const EvalOptions& opts)
{
    InvertOptions io;
    io.eval = opts;
    const ModularParameter tau = invert_lambda(t, tau_seed, io);
    const BranchChoice b = branch ? branch->continued_to(tau, opts) : BranchChoice::principal(tau, opts);
    const PeriodPair pp = curve_periods(tau, b);
    return {pp.pi1, pp.pi2, tau, b};
}

PeriodContinuation::PeriodContinuation(cplx t0, const ModularParameter& tau_seed, std::optional<BranchChoice> branch,
                                       const EvalOptions& opts)
    : ref_(period_functions(t0, tau_seed, branch, opts)), opts_(opts)
{
}

Periods PeriodContinuation::at(cplx t) const { return period_functions(t, ref_.tau, ref_.branch, opts_); }

std::vector<AbelianSample> abelian_track(const Trajectory& tr, const EvalOptions& opts)
{
    std::vector<AbelianSample> out;
    out.reserve(tr.samples.size());
    InvertOptions io;
    io.eval = opts;
    PreimageOptions po;
    po.eval = opts;

    std::optional<cplx> y_prev;
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        const Sample& s = tr.samples[i];
        const AbelianSample* prev = out.empty() ? nullptr : &out.back();
        if (tr.chart == Chart::Elliptic) {
            const ModularParameter tau(s.base);
            const EllipticLattice lat(tau, opts);
            const BranchChoice b = prev ? prev->branch.continued_to(tau, opts) : BranchChoice::principal(tau, opts);
            const CurvePoint c = phi(s.state[0], lat, b);
            out.push_back({c.t, c.X, c.Y, tau, b, s.state[0], 2.0 * b.value() * s.state[0]});
            continue;
        }
        cplx X, Y, t = s.base;
        if (tr.chart == Chart::Algebraic) {
            X = s.state[1];
            Y = s.state[2];
        } else {
            const AlgebraicState a = to_algebraic(ClassicalState{s.state[0], s.state[1], s.base}, y_prev);
            X = a.X;
            Y = a.Y;
        }
        y_prev = Y;
        const ModularParameter tau = prev ? invert_lambda(t, prev->tau, io) : invert_lambda(t, lambda_seed(t), io);
        const BranchChoice b = prev ? prev->branch.continued_to(tau, opts) : BranchChoice::principal(tau, opts);
        const EllipticLattice lat(tau, opts);
        cplx z = z_from_point({X, Y, t}, lat, b, prev ? std::optional<cplx>(prev->z) : std::nullopt, po);
        if (prev) {
            // z_from_point already returns the translate nearest the seed; what
            // is left is a genuine jump.
            const double shortest = std::min(1.0, std::abs(tau.value()));
            if (std::abs(z - prev->z) > 0.25 * shortest)
                throw Error(ErrorKind::BranchJump, "Abelian integral jumps between adjacent samples " +
                                                       std::to_string(i - 1) + " and " + std::to_string(i));
        }
        out.push_back({t, X, Y, tau, b, z, 2.0 * b.value() * z});
    }
    return out;
}

namespace {

std::size_t interior_index(const Trajectory& tr, cplx at)
{
    if (tr.samples.size() < 7)
        throw Error(ErrorKind::InsufficientSamples, "need at least 7 samples");
    const std::size_t i = nearest_index(tr.bases(), at);
    if (i < 3 || i + 3 >= tr.samples.size())
        throw Error(ErrorKind::InsufficientSamples, "evaluation point too close to the trajectory ends");
    return i;
}

cplx residual_at(const std::vector<AbelianSample>& tk, const PainleveParams& p, std::size_t i)
{
    std::vector<cplx> ts, as;
    for (std::size_t k = i - 3; k <= i + 3; ++k) {
        ts.push_back(tk[k].t);
        as.push_back(tk[k].A);
    }
    const AbelianSample& s = tk[i];
    const cplx t = s.t, X = s.X, Y = s.Y;
    const Jet j = window_jet(ts, as, 0, 7, t);
    const cplx lhs = t * (1.0 - t) * lt_of(j, t);
    const Quad& c = p.classical();
    const cplx rhs = c[0] * Y + c[1] * t * Y / (X * X) + c[2] * (t - 1.0) * Y / ((X - 1.0) * (X - 1.0)) +
                     (c[3] - 0.5) * t * (t - 1.0) * Y / ((X - t) * (X - t));
    return lhs - rhs;
}

} // namespace

cplx mu_residual(const Trajectory& tr, const PainleveParams& p, cplx at, const EvalOptions& opts)
{
    const std::size_t i = interior_index(tr, at);
    return residual_at(abelian_track(tr, opts), p, i);
}

double max_mu_residual(const Trajectory& tr, const PainleveParams& p, const EvalOptions& opts)
{
    if (tr.samples.size() < 7)
        throw Error(ErrorKind::InsufficientSamples, "need at least 7 samples");
    const auto tk = abelian_track(tr, opts);
    double worst = 0.0;
    for (std::size_t i = 3; i + 3 < tk.size(); ++i)
        worst = std::max(worst, std::abs(residual_at(tk, p, i)));
    return worst;
}

cplx mu_invariant(const Trajectory& tr, const std::function<cplx(cplx)>& g, const std::function<cplx(cplx)>& f,
                  cplx at, const EvalOptions& opts)
{
    const std::size_t i = interior_index(tr, at);
    const auto tk = abelian_track(tr, opts);

    auto raw = [&](const std::function<cplx(cplx)>& gg, const std::function<cplx(cplx)>& ff) {
        std::vector<cplx> ts, w1, w2, a;
        for (std::size_t k = i - 3; k <= i + 3; ++k) {
            const cplx gk = gg(tk[k].t);
            const PeriodPair pp = curve_periods(tk[k].tau, tk[k].branch);
            ts.push_back(tk[k].t);
            w1.push_back(gk * pp.pi1);
            w2.push_back(gk * pp.pi2);
            a.push_back(gk * tk[k].A);
        }
        const cplx t = tk[i].t;
        const Jet j1 = window_jet(ts, w1, 0, 7, t), j2 = window_jet(ts, w2, 0, 7, t), ja = window_jet(ts, a, 0, 7, t);
        // Monic operator D^2 + P D + Q annihilating both scaled periods.
        const cplx det = j1.d1 * j2.f - j2.d1 * j1.f;
        const cplx P = (-j1.d2 * j2.f + j2.d2 * j1.f) / det;
        const cplx Q = (-j1.d1 * j2.d2 + j2.d1 * j1.d2) / det;
        return ff(t) * (ja.d2 + P * ja.d1 + Q * ja.f);
    };
    const auto one = [](cplx) { return cplx(1.0); };
    const cplx t = tk[i].t;
    return raw(g, f) / (f(t) * g(t)) - raw(one, one);
}

} // namespace pvi
