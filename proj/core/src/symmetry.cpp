#include <pvi/symmetry.hpp>

#include <pvi/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pvi {

ModularElement::ModularElement(long a, long b, long c, long d, long m, long n)
    : a_(a), b_(b), c_(c), d_(d), m_(m), n_(n)
{
    if (a * d - b * c != 1)
        throw Error(ErrorKind::InvalidArgument, "modular element must have determinant 1");
    if (a % 2 == 0 || d % 2 == 0 || b % 2 != 0 || c % 2 != 0)
        throw Error(ErrorKind::InvalidArgument, "modular element is not in Gamma(2)");
}

ModularElement ModularElement::operator*(const ModularElement& o) const
{
    // (g1, v1)(g2, v2) = (g1 g2, v1 g2 + v2) with v a row vector (m, n).
    return {a_ * o.a_ + b_ * o.c_,   a_ * o.b_ + b_ * o.d_,   c_ * o.a_ + d_ * o.c_,
            c_ * o.b_ + d_ * o.d_,   m_ * o.a_ + n_ * o.c_ + o.m_, m_ * o.b_ + n_ * o.d_ + o.n_};
}

ModularElement ModularElement::inverse() const
{
    // gamma^{-1} = (d, -b; -c, a), v' = -v gamma^{-1}.
    return {d_, -b_, -c_, a_, -(m_ * d_ - n_ * c_), -(-m_ * b_ + n_ * a_)};
}

EllipticState gamma2_act(const ModularElement& g, const EllipticState& s)
{
    const cplx tau = s.tau.value();
    const double m = static_cast<double>(g.m()), n = static_cast<double>(g.n());
    const cplx y1 = s.y + m;
    const cplx z1 = s.z + m * tau + n;
    const cplx j = static_cast<double>(g.c()) * tau + static_cast<double>(g.d());
    const cplx tau2 = (static_cast<double>(g.a()) * tau + static_cast<double>(g.b())) / j;
    return {z1 / j, y1 * j - static_cast<double>(g.c()) * z1, ModularParameter(tau2)};
}

namespace {

void require_elliptic(const Trajectory& tr)
{
    if (tr.chart != Chart::Elliptic)
        throw Error(ErrorKind::InvalidArgument, "solution-level symmetries act on elliptic trajectories");
}

} // namespace

Trajectory gamma2_act(const ModularElement& g, const Trajectory& tr)
{
    require_elliptic(tr);
    Trajectory out = tr;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const EllipticState e = gamma2_act(g, tr.elliptic(i));
        out.samples[i].base = e.tau.value();
        out.samples[i].state = {e.z, e.y, 0.0};
    }
    return out;
}

ShiftedSection shift_zero_section(const HalfPeriodIndex& i, const EllipticState& s, const PainleveParams& p)
{
    const cplx tau = s.tau.value();
    Quad al{};
    for (int k = 0; k < 4; ++k)
        al[k] = p.alphas()[k ^ i.value()];
    return {{s.z + i.half_period(tau), s.y + 0.5 * static_cast<double>(i.tau_bit()), s.tau},
            PainleveParams::from_alphas(al)};
}

Trajectory shift_zero_section(const HalfPeriodIndex& i, const Trajectory& tr)
{
    require_elliptic(tr);
    Trajectory out = tr;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const ShiftedSection sh = shift_zero_section(i, tr.elliptic(k), tr.params);
        out.samples[k].state = {sh.state.z, sh.state.y, 0.0};
        if (k == 0)
            out.params = sh.params;
    }
    if (tr.size() == 0)
        out.params = shift_zero_section(i, {0.0, 0.0, ModularParameter(kI)}, tr.params).params;
    return out;
}

std::string_view to_string(LandinDirection d) noexcept
{
    return d == LandinDirection::Forward ? "forward" : "inverse";
}

PainleveParams landin(const PainleveParams& p, LandinDirection dir, double tol)
{
    const Quad& al = p.alphas();
    if (dir == LandinDirection::Forward) {
        if (std::abs(al[0] - al[2]) > tol || std::abs(al[1] - al[3]) > tol)
            throw Error(ErrorKind::PatternMismatch, "alphas are not of the form (a, b, a, b)");
        return PainleveParams::from_alphas({4.0 * al[0], 4.0 * al[1], 0.0, 0.0});
    }
    if (std::abs(al[2]) > tol || std::abs(al[3]) > tol)
        throw Error(ErrorKind::PatternMismatch, "alphas are not of the form (a, b, 0, 0)");
    return PainleveParams::from_alphas({0.25 * al[0], 0.25 * al[1], 0.25 * al[0], 0.25 * al[1]});
}

LandinResult landin_map(const Trajectory& tr, LandinDirection dir, const EvalOptions& opts)
{
    require_elliptic(tr);
    const PainleveParams target = landin(tr.params, dir);

    auto rescaled = [&](double scale) {
        // w(sigma) = z(sigma / scale), so dw/dsigma = y / scale.
        Trajectory out = tr;
        out.params = target;
        for (auto& s : out.samples) {
            s.base *= scale;
            s.state[1] /= scale;
        }
        return out;
    };
    auto residual = [&](const Trajectory& t) {
        try {
            return rhs_residual(t, target, opts);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    Trajectory half = rescaled(0.5), twice = rescaled(2.0);
    const double rh = residual(half), rt = residual(twice);
    if (rh <= rt)
        return {std::move(half), target, 0.5, rh, rt};
    return {std::move(twice), target, 2.0, rt, rh};
}

cplx landin_identity_residual(cplx z, const ModularParameter& tau, const EvalOptions& opts)
{
    const ModularParameter half(0.5 * tau.value());
    if (lattice_distance(z, half) < opts.pole_guard)
        throw Error(ErrorKind::PoleHit, "z is a pole of the Landin identity");
    const EllipticLattice full(tau, opts), halved(half, opts);
    return halved.wp_z(z) - full.wp_z(z) - full.wp_z(z + 0.5 * tau.value());
}

void WElement::validate() const
{
    for (int e : eps)
        if (e != 1 && e != -1)
            throw Error(ErrorKind::InvalidArgument, "W signs must be +1 or -1");
    std::array<int, 4> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 4>{0, 1, 2, 3})
        throw Error(ErrorKind::InvalidArgument, "W permutation is not a permutation of {0,1,2,3}");
    if (std::accumulate(shift.begin(), shift.end(), 0L) % 2 != 0)
        throw Error(ErrorKind::InvalidArgument, "W shift must have even sum");
}

WElement WElement::operator*(const WElement& o) const
{
    WElement r;
    for (int i = 0; i < 4; ++i) {
        const int j = perm[i];
        r.perm[i] = o.perm[j];
        r.eps[i] = eps[i] * o.eps[j];
        r.shift[i] = eps[i] * o.shift[j] + shift[i];
    }
    return r;
}

WElement WElement::inverse() const
{
    WElement r;
    for (int i = 0; i < 4; ++i) {
        const int j = perm[i];
        r.perm[j] = i;
        r.eps[j] = eps[i];
        r.shift[j] = -eps[i] * shift[i];
    }
    return r;
}

Quad w_act(const WElement& w, const Quad& a)
{
    w.validate();
    Quad r{};
    for (int i = 0; i < 4; ++i)
        r[i] = static_cast<double>(w.eps[i]) * a[w.perm[i]] + static_cast<double>(w.shift[i]);
    return r;
}

std::string_view to_string(SolvabilityTag t) noexcept
{
    switch (t) {
    case SolvabilityTag::ClassicalGeneral:
        return "classical_general";
    case SolvabilityTag::OneDimFamily:
        return "one_dim_family";
    case SolvabilityTag::HypergeometricHyperplane:
        return "hypergeometric_hyperplane";
    case SolvabilityTag::Unknown:
        break;
    }
    return "unknown";
}

std::string_view to_string(WitnessStep::Kind k) noexcept
{
    switch (k) {
    case WitnessStep::Kind::W:
        return "w";
    case WitnessStep::Kind::Landin:
        return "landin";
    case WitnessStep::Kind::LandinInverse:
        break;
    }
    return "landin_inverse";
}

Quad landin_avec(const Quad& a, LandinDirection dir, double tol)
{
    if (dir == LandinDirection::Forward) {
        if (std::abs(a[0] - a[2]) > tol || std::abs(a[1] - a[3]) > tol)
            throw Error(ErrorKind::PatternMismatch, "a-vector is not of the form (a, b, a, b)");
        return {2.0 * a[0], 2.0 * a[1], 0.0, 0.0};
    }
    if (std::abs(a[2]) > tol || std::abs(a[3]) > tol)
        throw Error(ErrorKind::PatternMismatch, "a-vector is not of the form (a, b, 0, 0)");
    return {0.5 * a[0], 0.5 * a[1], 0.5 * a[0], 0.5 * a[1]};
}

namespace {

using Real4 = std::array<double, 4>;

struct Canonical {
    WElement w; ///< w . a == c
    Real4 c;
};

Canonical canonicalize(const Real4& a, double tol)
{
    WElement w;
    Real4 r{};
    long parity = 0;
    for (int i = 0; i < 4; ++i) {
        const double k = std::round(a[i]);
        const double f = a[i] - k;
        const int s = f < 0.0 ? -1 : 1;
        w.eps[i] = s;
        w.shift[i] = -s * static_cast<long>(k);
        r[i] = std::abs(f);
        parity += w.shift[i];
    }
    if (parity % 2 != 0) {
        int half = -1;
        for (int i = 0; i < 4; ++i)
            if (std::abs(r[i] - 0.5) <= tol)
                half = i;
        if (half >= 0) {
            // The other representative of 1/2 flips the parity.
            const int i = half;
            w.eps[i] = -w.eps[i];
            w.shift[i] = 1 - w.shift[i];
            r[i] = 0.5;
        } else {
            const int i = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
            w.shift[i] += 1;
            r[i] += 1.0;
        }
    }
    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return r[x] < r[y]; });
    WElement sorter;
    sorter.perm = order;
    Canonical out{sorter * w, {}};
    for (int i = 0; i < 4; ++i)
        out.c[i] = r[order[i]];
    return out;
}

bool close(const Real4& x, const Real4& y, double tol)
{
    for (int i = 0; i < 4; ++i)
        if (std::abs(x[i] - y[i]) > tol)
            return false;
    return true;
}

struct Base {
    SolvabilityTag tag;
    Real4 point;
};

const std::array<Base, 5>& bases()
{
    static const std::array<Base, 5> b{{
        {SolvabilityTag::ClassicalGeneral, {0.0, 0.0, 0.0, 0.0}},
        {SolvabilityTag::ClassicalGeneral, {0.5, 0.5, 0.5, 0.5}},
        {SolvabilityTag::OneDimFamily, {0.0, 0.0, 0.0, 1.0}},
        {SolvabilityTag::OneDimFamily, {0.0, 0.0, 0.5, 0.5}},
        {SolvabilityTag::OneDimFamily, {0.25, 0.25, 0.25, 0.25}},
    }};
    return b;
}

const Base* match_base(const Real4& c, double tol)
{
    for (const Base& b : bases())
        if (close(c, b.point, tol))
            return &b;
    return nullptr;
}

Quad to_quad(const Real4& x) { return {x[0], x[1], x[2], x[3]}; }

Real4 to_real(const Quad& x) { return {x[0].real(), x[1].real(), x[2].real(), x[3].real()}; }

const std::vector<WElement>& w_neighbourhood()
{
    static const std::vector<WElement> all = [] {
        std::vector<WElement> v;
        std::array<int, 4> p{0, 1, 2, 3};
        do {
            for (int sg = 0; sg < 16; ++sg)
                for (int sh = 0; sh < 81; ++sh) {
                    WElement w;
                    w.perm = p;
                    long sum = 0;
                    int code = sh;
                    for (int i = 0; i < 4; ++i) {
                        w.eps[i] = (sg >> i) & 1 ? -1 : 1;
                        w.shift[i] = code % 3 - 1;
                        code /= 3;
                        sum += w.shift[i];
                    }
                    if (sum % 2 == 0)
                        v.push_back(w);
                }
        } while (std::next_permutation(p.begin(), p.end()));
        return v;
    }();
    return all;
}

struct Node {
    Real4 canonical;
    std::vector<WitnessStep> witness; ///< ends with the step onto `canonical`
};

} // namespace

bool SolvabilityClass::replay(const Quad& a, double tol) const
{
    if (tag == SolvabilityTag::Unknown)
        return witness.empty();
    Quad x = a;
    try {
        for (const WitnessStep& s : witness) {
            if (s.kind == WitnessStep::Kind::W)
                x = w_act(s.w, x);
            else
                x = landin_avec(x, s.kind == WitnessStep::Kind::Landin ? LandinDirection::Forward
                                                                        : LandinDirection::Inverse,
                                tol);
        }
    } catch (const Error&) {
        return false;
    }
    for (int i = 0; i < 4; ++i)
        if (std::abs(x[i] - base_point[i]) > tol)
            return false;
    if (tag == SolvabilityTag::HypergeometricHyperplane)
        return std::abs(x[0] + x[1] + x[2] + x[3] - 1.0) <= tol;
    return true;
}

SolvabilityClass classify(const Quad& a, double tol)
{
    for (const cplx& v : a)
        if (std::abs(v.imag()) > tol || !std::isfinite(v.real()))
            return {};
    const Real4 ar = to_real(a);

    const Canonical c0 = canonicalize(ar, tol);
    if (const Base* b = match_base(c0.c, tol))
        return {b->tag, {{WitnessStep::Kind::W, c0.w}}, to_quad(b->point)};

    // Landin moves on W-images of the canonical form, two levels deep.
    std::vector<Node> frontier{{c0.c, {{WitnessStep::Kind::W, c0.w}}}};
    std::vector<Real4> seen{c0.c};
    for (int depth = 0; depth < 2; ++depth) {
        std::vector<Node> next;
        for (const Node& node : frontier) {
            const WElement& last = node.witness.back().w;
            for (const WElement& v : w_neighbourhood()) {
                Real4 x{};
                for (int i = 0; i < 4; ++i)
                    x[i] = v.eps[i] * node.canonical[v.perm[i]] + static_cast<double>(v.shift[i]);
                for (LandinDirection dir : {LandinDirection::Forward, LandinDirection::Inverse}) {
                    Quad y;
                    try {
                        y = landin_avec(to_quad(x), dir, tol);
                    } catch (const Error&) {
                        continue;
                    }
                    const Canonical cy = canonicalize(to_real(y), tol);
                    if (std::any_of(seen.begin(), seen.end(), [&](const Real4& s) { return close(s, cy.c, tol); }))
                        continue;
                    seen.push_back(cy.c);
                    Node n{cy.c, node.witness};
                    n.witness.back().w = v * last;
                    n.witness.push_back({dir == LandinDirection::Forward ? WitnessStep::Kind::Landin
                                                                         : WitnessStep::Kind::LandinInverse,
                                         {}});
                    n.witness.push_back({WitnessStep::Kind::W, cy.w});
                    next.push_back(std::move(n));
                }
            }
        }
        const Node* hit = nullptr;
        const Base* hit_base = nullptr;
        for (const Node& n : next)
            if (const Base* b = match_base(n.canonical, tol); b && (!hit_base || b->tag < hit_base->tag)) {
                hit = &n;
                hit_base = b;
            }
        if (hit)
            return {hit_base->tag, hit->witness, to_quad(hit_base->point)};
        frontier = std::move(next);
    }

    for (int sg = 0; sg < 16; ++sg) {
        WElement w;
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            w.eps[i] = (sg >> i) & 1 ? -1 : 1;
            sum += w.eps[i] * ar[i];
        }
        const double k = (sum - 1.0) / 2.0;
        if (std::abs(k - std::round(k)) > tol)
            continue;
        w.shift[0] = -2 * static_cast<long>(std::round(k));
        return {SolvabilityTag::HypergeometricHyperplane, {{WitnessStep::Kind::W, w}}, w_act(w, a)};
    }
    return {};
}

namespace {

void okamoto_guard(const AlgebraicState& s)
{
    constexpr double g = 1e-12;
    if (std::abs(s.X) < g || std::abs(s.X - 1.0) < g || std::abs(s.X - s.t) < g || std::abs(s.Y) < g)
        throw Error(ErrorKind::PoleHit, "Okamoto observables are singular at X in {0, 1, t}");
}

cplx curve_root(cplx X, cplx t, cplx reference)
{
    const cplx r = std::sqrt(X * (X - 1.0) * (X - t));
    return std::abs(r - reference) <= std::abs(r + reference) ? r : -r;
}

} // namespace

cplx okamoto_p(const AlgebraicState& s, const Quad& a)
{
    okamoto_guard(s);
    return s.U / s.Y + 0.5 * (a[1] / s.X + a[2] / (s.X - 1.0) + (a[3] - 1.0) / (s.X - s.t));
}

cplx okamoto_h(const AlgebraicState& s, const Quad& a)
{
    okamoto_guard(s);
    const cplx X = s.X, t = s.t, U = s.U;
    const cplx a0 = a[0] * a[0], a1 = a[1] * a[1], a2 = a[2] * a[2], a3 = (a[3] - 1.0) * (a[3] - 1.0);
    return U * U + 0.25 * (-a0 * X - a1 * t / X + a2 * (t - 1.0) / (X - 1.0) - a3 * t * (t - 1.0) / (X - t)) -
           0.25 * a3 * t + 0.125 * (a0 + a1 - a2 + a3);
}

cplx okamoto_D(const Observable& f, const AlgebraicState& s, const Quad& a)
{
    okamoto_guard(s);
    const cplx U = s.U, X = s.X, Y = s.Y, t = s.t;

    // Largest power-of-two step keeping the stencil clear of X in {0, 1, t}
    // and t in {0, 1}.
    const double room = std::min({std::abs(X), std::abs(X - 1.0), std::abs(X - t), std::abs(t), std::abs(t - 1.0)});
    const double h = std::ldexp(1.0, std::min(-7, static_cast<int>(std::floor(std::log2(room / 8.0)))));

    auto at = [&](cplx u, cplx x, cplx tt) { return f({u, x, curve_root(x, tt, Y), tt}); };
    const cplx fu = central_derivatives([&](cplx v) { return at(v, X, t); }, U, h).d1;
    const cplx fx = central_derivatives([&](cplx v) { return at(U, v, t); }, X, h).d1;
    const cplx ft = central_derivatives([&](cplx v) { return at(U, X, v); }, t, h).d1;

    const cplx tt1 = t * (t - 1.0);
    const cplx bracket = a[0] * a[0] - a[1] * a[1] * t / (X * X) + a[2] * a[2] * (t - 1.0) / ((X - 1.0) * (X - 1.0)) -
                         (a[3] * a[3] - 1.0) * tt1 / ((X - t) * (X - t));
    return ft + 2.0 * U * Y / tt1 * fx - (U / (2.0 * (X - t)) - Y / (4.0 * tt1) * bracket) * fu;
}

OkamotoShift okamoto_shift_h(cplx h_value, const AlgebraicState& s, const Quad& a)
{
    okamoto_guard(s);
    const cplx X = s.X;
    const cplx h = h_value - X * (X - 1.0) * okamoto_p(s, a) + 0.5 * (-a[0] + a[1] + a[2] + a[3] - 1.0) * X +
                   0.25 * (a[0] - 2.0 * a[1] - a[3] + 1.0);
    return {h, {a[0] + 1.0, a[1], a[2], a[3] + 1.0}};
}

} // namespace pvi
