#include <pvi/dynamics.hpp>

#include <pvi/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace pvi {

std::string_view to_string(Chart chart) noexcept
{
    switch (chart) {
    case Chart::Elliptic: return "elliptic";
    case Chart::Classical: return "classical";
    case Chart::Algebraic: return "algebraic";
    }
    return "elliptic";
}

Chart chart_from_string(std::string_view name)
{
    if (name == "elliptic")
        return Chart::Elliptic;
    if (name == "classical")
        return Chart::Classical;
    if (name == "algebraic")
        return Chart::Algebraic;
    throw Error(ErrorKind::InvalidArgument, "unknown chart '" + std::string(name) + "'");
}

int chart_dimension(Chart chart) noexcept { return chart == Chart::Algebraic ? 3 : 2; }

Chart chart_of(const AnyState& s) noexcept
{
    return std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EllipticState>)
                return Chart::Elliptic;
            else if constexpr (std::is_same_v<T, ClassicalState>)
                return Chart::Classical;
            else
                return Chart::Algebraic;
        },
        s);
}

EllipticState Trajectory::elliptic(std::size_t i) const
{
    if (chart != Chart::Elliptic)
        throw Error(ErrorKind::InvalidArgument, "trajectory is not in the elliptic chart");
    const Sample& s = samples.at(i);
    return {s.state[0], s.state[1], ModularParameter(s.base)};
}

ClassicalState Trajectory::classical(std::size_t i) const
{
    if (chart != Chart::Classical)
        throw Error(ErrorKind::InvalidArgument, "trajectory is not in the classical chart");
    const Sample& s = samples.at(i);
    return {s.state[0], s.state[1], s.base};
}

AlgebraicState Trajectory::algebraic(std::size_t i) const
{
    if (chart != Chart::Algebraic)
        throw Error(ErrorKind::InvalidArgument, "trajectory is not in the algebraic chart");
    const Sample& s = samples.at(i);
    return {s.state[0], s.state[1], s.state[2], s.base};
}

std::vector<cplx> Trajectory::bases() const
{
    std::vector<cplx> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.base);
    return out;
}

std::vector<cplx> Trajectory::component(int k) const
{
    std::vector<cplx> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.state.at(static_cast<std::size_t>(k)));
    return out;
}

double PathSpec::length() const noexcept
{
    double l = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        l += std::abs(vertices[i] - vertices[i - 1]);
    return l;
}

void IntegratorConfig::validate() const
{
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw Error(ErrorKind::InvalidArgument, "integrator tolerances must be positive");
    if (!(max_step > 0.0) || !(initial_step > 0.0) || !(sample_spacing > 0.0))
        throw Error(ErrorKind::InvalidArgument, "integrator steps must be positive");
    if (!(pole_guard >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "pole guard must be non-negative");
    eval.validate();
}

// ---------------------------------------------------------------------------
// Right-hand sides

namespace {

constexpr double kHalfOne[4] = {0.0, 0.5, 0.0, 0.5};
constexpr double kHalfTau[4] = {0.0, 0.0, 0.5, 0.5};

cplx half_shift(int j, cplx tau) { return kHalfOne[j] + kHalfTau[j] * tau; }

void guard_point(cplx w, const ModularParameter& tau, double guard, const char* what)
{
    if (guard > 0.0 && lattice_distance(w, tau) < guard)
        throw Error(ErrorKind::PoleHit, what);
}

void guard_base(cplx t, double guard)
{
    if (std::abs(t) < std::max(guard, 1e-300) || std::abs(t - 1.0) < std::max(guard, 1e-300))
        throw Error(ErrorKind::PoleHit, "base point t at 0 or 1");
}

void guard_x(cplx X, cplx t, double guard)
{
    const double g = std::max(guard, 1e-300);
    if (std::abs(X) < g || std::abs(X - 1.0) < g || std::abs(X - t) < g)
        throw Error(ErrorKind::PoleHit, "X at a branch point 0, 1 or t");
    if (!std::isfinite(std::abs(X)) || (guard > 0.0 && std::abs(X) > 1.0 / guard))
        throw Error(ErrorKind::PoleHit, "X at infinity");
}

} // namespace

cplx rhs_elliptic(cplx z, const EllipticLattice& lattice, const PainleveParams& p, double guard)
{
    const cplx tau = lattice.tau().value();
    cplx acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        const cplx a = p.alphas()[j];
        if (a == cplx(0.0))
            continue;
        const cplx w = z + half_shift(j, tau);
        guard_point(w, lattice.tau(), std::max(guard, lattice.options().pole_guard), "z + T_j/2 at a lattice point");
        acc += a * lattice.wp_z(w);
    }
    return kForcePrefactor * acc;
}

cplx rhs_elliptic(const EllipticState& s, const PainleveParams& p, const EvalOptions& opts)
{
    return rhs_elliptic(s.z, EllipticLattice(s.tau, opts), p);
}

namespace {

cplx rhs_generalized(cplx z, const EllipticLattice& lattice, const GeneralizedParams& p, double guard)
{
    const cplx tau = lattice.tau().value();
    cplx acc = 0.0;
    for (const auto& term : p.terms) {
        if (term.alpha == cplx(0.0))
            continue;
        const cplx w = z + term.zeta(tau);
        guard_point(w, lattice.tau(), std::max(guard, lattice.options().pole_guard), "z + zeta at a lattice point");
        acc += term.alpha * lattice.wp_z(w);
    }
    return kForcePrefactor * acc;
}

} // namespace

cplx rhs_elliptic(const EllipticState& s, const GeneralizedParams& p, const EvalOptions& opts)
{
    p.validate();
    return rhs_generalized(s.z, EllipticLattice(s.tau, opts), p, 0.0);
}

cplx rhs_classical(const ClassicalState& s, const PainleveParams& p, double guard)
{
    const cplx X = s.X, V = s.Xdot, t = s.t;
    guard_base(t, guard);
    guard_x(X, t, guard);
    const Quad& c = p.classical();
    const cplx Xm = X - 1.0, Xt = X - t, tm = t - 1.0;
    const cplx bracket = c[0] + c[1] * t / (X * X) + c[2] * tm / (Xm * Xm) + c[3] * t * tm / (Xt * Xt);
    return 0.5 * (1.0 / X + 1.0 / Xm + 1.0 / Xt) * V * V - (1.0 / t + 1.0 / tm + 1.0 / Xt) * V +
           X * Xm * Xt / (t * t * tm * tm) * bracket;
}

AlgebraicRhs rhs_algebraic(const AlgebraicState& s, const PainleveParams& p, double guard)
{
    const cplx U = s.U, X = s.X, Y = s.Y, t = s.t;
    guard_base(t, guard);
    guard_x(X, t, guard);
    if (Y == cplx(0.0))
        throw Error(ErrorKind::PoleHit, "Y vanishes");
    const Quad& c = p.classical();
    const cplx tt = t * (t - 1.0);
    const cplx Xm = X - 1.0, Xt = X - t;
    const cplx P = c[0] + c[1] * t / (X * X) + c[2] * (t - 1.0) / (Xm * Xm) + c[3] * tt / (Xt * Xt);
    const cplx dX = 2.0 * U * Y / tt;
    const cplx dU = -U / (2.0 * Xt) + Y / (2.0 * tt) * P;
    const cplx dY = ((3.0 * X * X - 2.0 * (1.0 + t) * X + t) * dX - X * Xm) / (2.0 * Y);
    return {dX, dU, dY};
}

cplx hamiltonian(const EllipticState& s, const PainleveParams& p, const EvalOptions& opts)
{
    const EllipticLattice lat(s.tau, opts);
    const cplx tau = s.tau.value();
    cplx acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        const cplx a = p.alphas()[j];
        if (a == cplx(0.0))
            continue;
        const cplx w = s.z + half_shift(j, tau);
        if (lattice_distance(w, s.tau) < opts.pole_guard)
            throw Error(ErrorKind::PoleHit, "z + T_j/2 at a lattice point");
        acc += a * lat.wp(w);
    }
    return 0.5 * s.y * s.y - kForcePrefactor * acc;
}

// ---------------------------------------------------------------------------
// Integrator: Dormand-Prince 5(4) in the real arc-length parameter of each
// polyline segment.

namespace {

using Vec = std::array<cplx, 3>;
using System = std::function<Vec(cplx, const Vec&)>;

constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;
constexpr double C2 = 0.2, C3 = 0.3, C4 = 0.8, C5 = 8.0 / 9;

Vec axpy(const Vec& y, cplx h, std::initializer_list<std::pair<double, const Vec*>> terms, int n)
{
    Vec out = y;
    for (int i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (const auto& [c, k] : terms)
            acc += c * (*k)[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] += h * acc;
    }
    return out;
}

void check_path(const PathSpec& path, Chart chart, double guard, cplx start)
{
    if (path.vertices.size() < 2)
        throw Error(ErrorKind::InvalidPath, "path needs at least two vertices");
    if (std::abs(path.vertices.front() - start) > 1e-12 * std::max(1.0, std::abs(start)))
        throw Error(ErrorKind::InvalidPath, "path must start at the initial base point");
    for (std::size_t i = 1; i < path.vertices.size(); ++i) {
        const cplx a = path.vertices[i - 1], b = path.vertices[i];
        if (std::abs(b - a) == 0.0)
            throw Error(ErrorKind::InvalidPath, "path has repeated vertices");
        if (chart == Chart::Elliptic) {
            if (a.imag() < kMinImagTau + guard || b.imag() < kMinImagTau + guard)
                throw Error(ErrorKind::InvalidPath, "tau path leaves Im tau > 0.05");
        } else {
            for (cplx sing : {cplx(0.0), cplx(1.0)}) {
                const cplx d = b - a;
                double u = std::real((sing - a) * std::conj(d)) / std::norm(d);
                u = std::clamp(u, 0.0, 1.0);
                if (std::abs(a + u * d - sing) < std::max(guard, 1e-12))
                    throw Error(ErrorKind::InvalidPath, "t path passes through 0 or 1");
            }
        }
    }
}

Trajectory run(Chart chart, int n, const Vec& y0, const PathSpec& path, const System& f, const IntegratorConfig& cfg,
               Trajectory proto)
{
    cfg.validate();
    proto.chart = chart;
    proto.samples.clear();
    proto.samples.push_back({path.vertices.front(), y0, 0.0});

    auto err_norm = [&](const Vec& y, const Vec& yn, const Vec& e, double& abs_err) {
        double m = 0.0;
        abs_err = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[k]), std::abs(yn[k]));
            m = std::max(m, std::abs(e[k]) / sc);
            abs_err = std::max(abs_err, std::abs(e[k]));
        }
        return m;
    };

    Vec y = y0;
    double h = std::min(cfg.initial_step, cfg.max_step);
    long steps = 0;
    double pending_err = 0.0;
    cplx here = path.vertices.front();

    auto abort_pole = [&](const Error& e) -> void {
        if (e.kind() == ErrorKind::PoleHit || e.kind() == ErrorKind::PoleAtLatticePoint ||
            e.kind() == ErrorKind::PoleAtThetaZero || e.kind() == ErrorKind::PointAtInfinity)
            throw PoleApproachError(std::string("integration stopped near a singularity: ") + e.what(), proto, here);
        throw;
    };

    for (std::size_t seg = 1; seg < path.vertices.size(); ++seg) {
        const cplx a = path.vertices[seg - 1], b = path.vertices[seg];
        const double len = std::abs(b - a);
        const cplx dir = (b - a) / len;
        const int pieces = std::max(1, static_cast<int>(std::ceil(len / cfg.sample_spacing - 1e-9)));
        auto g = [&](double s, const Vec& v) {
            Vec d = f(a + s * dir, v);
            for (int i = 0; i < n; ++i)
                d[static_cast<std::size_t>(i)] *= dir;
            return d;
        };
        double s = 0.0;
        Vec k1;
        try {
            k1 = g(0.0, y);
        } catch (const Error& e) {
            abort_pole(e);
        }
        for (int piece = 1; piece <= pieces; ++piece) {
            const double target = piece == pieces ? len : len * piece / pieces;
            while (s < target) {
                if (++steps > cfg.max_steps)
                    throw Error(ErrorKind::StepUnderflow, "maximum number of steps exceeded");
                if (h < 1e-13 * std::max(1.0, len))
                    throw Error(ErrorKind::StepUnderflow, "step size underflow near base " + std::to_string(here.real()) +
                                                              "+" + std::to_string(here.imag()) + "i");
                const bool last = s + h >= target;
                const double hh = last ? target - s : h;
                Vec k2, k3, k4, k5, k6, k7, yn;
                bool failed = false;
                try {
                    k2 = g(s + C2 * hh, axpy(y, hh, {{A21, &k1}}, n));
                    k3 = g(s + C3 * hh, axpy(y, hh, {{A31, &k1}, {A32, &k2}}, n));
                    k4 = g(s + C4 * hh, axpy(y, hh, {{A41, &k1}, {A42, &k2}, {A43, &k3}}, n));
                    k5 = g(s + C5 * hh, axpy(y, hh, {{A51, &k1}, {A52, &k2}, {A53, &k3}, {A54, &k4}}, n));
                    k6 = g(s + hh, axpy(y, hh, {{A61, &k1}, {A62, &k2}, {A63, &k3}, {A64, &k4}, {A65, &k5}}, n));
                    yn = axpy(y, hh, {{B1, &k1}, {B3, &k3}, {B4, &k4}, {B5, &k5}, {B6, &k6}}, n);
                    k7 = g(s + hh, yn);
                } catch (const Error& e) {
                    // A stage landed inside the guard; retry smaller unless the
                    // accepted state itself is already there.
                    if (e.kind() == ErrorKind::PoleHit || e.kind() == ErrorKind::PoleAtLatticePoint ||
                        e.kind() == ErrorKind::PoleAtThetaZero || e.kind() == ErrorKind::PointAtInfinity ||
                        e.kind() == ErrorKind::NonConvergent) {
                        failed = true;
                        if (hh < 1e-10 * std::max(1.0, len))
                            abort_pole(Error(ErrorKind::PoleHit, e.what()));
                    } else {
                        throw;
                    }
                }
                if (failed) {
                    h = 0.25 * hh;
                    continue;
                }
                Vec ev{};
                for (int i = 0; i < n; ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    ev[k] = hh * (E1 * k1[k] + E3 * k3[k] + E4 * k4[k] + E5 * k5[k] + E6 * k6[k] + E7 * k7[k]);
                }
                double abs_err = 0.0;
                const double en = err_norm(y, yn, ev, abs_err);
                if (!std::isfinite(en)) {
                    h = 0.25 * hh;
                    continue;
                }
                const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
                if (en <= 1.0) {
                    s = last ? target : s + hh;
                    y = yn;
                    k1 = k7;
                    here = a + s * dir;
                    pending_err += abs_err;
                    if (!last || hh >= h)
                        h = std::min(hh * fac, cfg.max_step);
                } else {
                    h = hh * std::max(fac, 0.1);
                }
            }
            proto.samples.push_back({a + target * dir, y, pending_err});
            pending_err = 0.0;
        }
        proto.samples.back().base = b;
    }
    return proto;
}

} // namespace

Trajectory integrate(const EllipticState& init, const PathSpec& path, const PainleveParams& p,
                     const IntegratorConfig& cfg)
{
    check_path(path, Chart::Elliptic, cfg.pole_guard, init.tau.value());
    const double guard = cfg.pole_guard;
    const EvalOptions opts = cfg.eval;
    System f = [&](cplx tau, const Vec& v) -> Vec {
        const EllipticLattice lat(ModularParameter(tau), opts);
        return {v[1], rhs_elliptic(v[0], lat, p, guard), 0.0};
    };
    Trajectory proto;
    proto.params = p;
    return run(Chart::Elliptic, 2, {init.z, init.y, 0.0}, path, f, cfg, std::move(proto));
}

Trajectory integrate(const EllipticState& init, const PathSpec& path, const GeneralizedParams& p,
                     const IntegratorConfig& cfg)
{
    p.validate();
    check_path(path, Chart::Elliptic, cfg.pole_guard, init.tau.value());
    const double guard = cfg.pole_guard;
    const EvalOptions opts = cfg.eval;
    System f = [&](cplx tau, const Vec& v) -> Vec {
        const EllipticLattice lat(ModularParameter(tau), opts);
        return {v[1], rhs_generalized(v[0], lat, p, guard), 0.0};
    };
    Trajectory proto;
    proto.generalized = p.terms;
    return run(Chart::Elliptic, 2, {init.z, init.y, 0.0}, path, f, cfg, std::move(proto));
}

Trajectory integrate(const ClassicalState& init, const PathSpec& path, const PainleveParams& p,
                     const IntegratorConfig& cfg)
{
    check_path(path, Chart::Classical, cfg.pole_guard, init.t);
    const double guard = cfg.pole_guard;
    System f = [&](cplx t, const Vec& v) -> Vec { return {v[1], rhs_classical({v[0], v[1], t}, p, guard), 0.0}; };
    Trajectory proto;
    proto.params = p;
    return run(Chart::Classical, 2, {init.X, init.Xdot, 0.0}, path, f, cfg, std::move(proto));
}

Trajectory integrate(const AlgebraicState& init, const PathSpec& path, const PainleveParams& p,
                     const IntegratorConfig& cfg)
{
    check_path(path, Chart::Algebraic, cfg.pole_guard, init.t);
    const double guard = cfg.pole_guard;
    System f = [&](cplx t, const Vec& v) -> Vec {
        const AlgebraicRhs r = rhs_algebraic({v[0], v[1], v[2], t}, p, guard);
        return {r.dU, r.dX, r.dY};
    };
    Trajectory proto;
    proto.params = p;
    return run(Chart::Algebraic, 3, {init.U, init.X, init.Y}, path, f, cfg, std::move(proto));
}

Trajectory integrate(const AnyState& init, const PathSpec& path, const PainleveParams& p,
                     const IntegratorConfig& cfg)
{
    return std::visit([&](const auto& s) { return integrate(s, path, p, cfg); }, init);
}

// ---------------------------------------------------------------------------
// Chart conversions

namespace {

cplx logderiv_or_pole(const EllipticLattice& lat, cplx z)
{
    try {
        return lat.theta_logderiv(z);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::PoleAtThetaZero)
            throw Error(ErrorKind::PoleHit, "z at the theta zero (X = t)");
        throw;
    }
}

CurvePoint phi_or_pole(cplx z, const EllipticLattice& lat, const BranchChoice& b)
{
    try {
        return phi(z, lat, b);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::PointAtInfinity || e.kind() == ErrorKind::PoleAtLatticePoint)
            throw Error(ErrorKind::PoleHit, "z at a lattice point (X at infinity)");
        throw;
    }
}

AlgebraicState to_algebraic(const EllipticState& s, const EllipticLattice& lat, const BranchChoice& branch)
{
    const CurvePoint c = phi_or_pole(s.z, lat, branch);
    const cplx U = (kTwoPiI * s.y + logderiv_or_pole(lat, s.z)) / (2.0 * branch.value());
    return {U, c.X, c.Y, c.t};
}

EllipticState to_elliptic(const AlgebraicState& s, const EllipticLattice& lat, const BranchChoice& branch,
                          std::optional<cplx> z_seed)
{
    PreimageOptions po;
    po.eval = lat.options();
    const cplx z = z_from_point({s.X, s.Y, s.t}, lat, branch, z_seed, po);
    const cplx y = (2.0 * branch.value() * s.U - logderiv_or_pole(lat, z)) / kTwoPiI;
    return {z, y, lat.tau()};
}

cplx nearest_root(cplx X, cplx t, std::optional<cplx> ref)
{
    const cplx r = std::sqrt(X * (X - 1.0) * (X - t));
    if (ref && std::abs(*ref + r) < std::abs(*ref - r))
        return -r;
    return r;
}

} // namespace

AlgebraicState to_algebraic(const EllipticState& s, const BranchChoice& branch, const EvalOptions& opts)
{
    return to_algebraic(s, EllipticLattice(s.tau, opts), branch);
}

EllipticState to_elliptic(const AlgebraicState& s, const ModularParameter& tau, const BranchChoice& branch,
                          std::optional<cplx> z_seed, const EvalOptions& opts)
{
    return to_elliptic(s, EllipticLattice(tau, opts), branch, z_seed);
}

ClassicalState to_classical(const AlgebraicState& s)
{
    guard_base(s.t, 0.0);
    return {s.X, 2.0 * s.U * s.Y / (s.t * (s.t - 1.0)), s.t};
}

AlgebraicState to_algebraic(const ClassicalState& s, std::optional<cplx> y_reference)
{
    guard_base(s.t, 0.0);
    const cplx Y = nearest_root(s.X, s.t, y_reference);
    if (Y == cplx(0.0))
        throw Error(ErrorKind::PoleHit, "X at a branch point; U is undefined");
    return {s.t * (s.t - 1.0) * s.Xdot / (2.0 * Y), s.X, Y, s.t};
}

namespace {

BranchChoice branch_for(const ChartContext& ctx, const ModularParameter& tau)
{
    if (!ctx.branch)
        return BranchChoice::principal(tau, ctx.eval);
    const HalfPeriodValues e = half_period_values(tau, ctx.eval);
    const cplx b = ctx.branch->value();
    if (std::abs(b * b - (e.e2 - e.e1)) > ctx.consistency * std::abs(e.e2 - e.e1))
        throw Error(ErrorKind::InconsistentContext, "branch does not square to e2 - e1 at this tau");
    return *ctx.branch;
}

ModularParameter tau_for(const ChartContext& ctx, cplx t)
{
    const ModularParameter seed = ctx.tau ? *ctx.tau : lambda_seed(t);
    InvertOptions io;
    io.eval = ctx.eval;
    try {
        return invert_lambda(t, seed, io);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NoConvergence && !ctx.tau)
            return invert_lambda(t, lambda_seed(t), io);
        throw;
    }
}

} // namespace

AnyState convert_state(const AnyState& s, Chart target, const ChartContext& ctx)
{
    const Chart source = chart_of(s);
    if (source == target)
        return s;
    if (source == Chart::Elliptic) {
        const auto& es = std::get<EllipticState>(s);
        if (ctx.tau && std::abs(ctx.tau->value() - es.tau.value()) > ctx.consistency * std::abs(es.tau.value()))
            throw Error(ErrorKind::InconsistentContext, "context tau differs from the state's tau");
        const AlgebraicState a = to_algebraic(es, EllipticLattice(es.tau, ctx.eval), branch_for(ctx, es.tau));
        if (target == Chart::Algebraic)
            return a;
        return to_classical(a);
    }
    AlgebraicState a = source == Chart::Algebraic ? std::get<AlgebraicState>(s)
                                                  : to_algebraic(std::get<ClassicalState>(s), ctx.y_reference);
    if (target == Chart::Algebraic)
        return a;
    if (target == Chart::Classical)
        return to_classical(a);
    const ModularParameter tau = tau_for(ctx, a.t);
    if (std::abs(modular_lambda(tau, ctx.eval) - a.t) > ctx.consistency * std::max(1.0, std::abs(a.t)))
        throw Error(ErrorKind::InconsistentContext, "tau does not reproduce t");
    return to_elliptic(a, EllipticLattice(tau, ctx.eval), branch_for(ctx, tau), ctx.z_seed);
}

Trajectory convert_trajectory(const Trajectory& tr, Chart target, const ChartContext& ctx)
{
    Trajectory out;
    out.chart = target;
    out.params = tr.params;
    out.generalized = tr.generalized;
    if (tr.chart == target || tr.samples.empty()) {
        out.samples = tr.samples;
        return out;
    }
    std::optional<BranchChoice> branch = ctx.branch;
    std::optional<ModularParameter> tau_prev = ctx.tau;
    std::optional<cplx> z_prev = ctx.z_seed;
    std::optional<cplx> y_prev = ctx.y_reference;

    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        const Sample& smp = tr.samples[i];
        AlgebraicState a{};
        if (tr.chart == Chart::Elliptic) {
            const ModularParameter tau(smp.base);
            const EllipticLattice lat(tau, ctx.eval);
            branch = branch ? (i == 0 ? branch_for(ctx, tau) : branch->continued_to(tau, ctx.eval))
                            : BranchChoice::principal(tau, ctx.eval);
            a = to_algebraic(EllipticState{smp.state[0], smp.state[1], tau}, lat, *branch);
        } else if (tr.chart == Chart::Classical) {
            a = to_algebraic(ClassicalState{smp.state[0], smp.state[1], smp.base}, y_prev);
            y_prev = a.Y;
        } else {
            a = {smp.state[0], smp.state[1], smp.state[2], smp.base};
        }

        Sample o;
        o.err = smp.err;
        if (target == Chart::Algebraic) {
            o.base = a.t;
            o.state = {a.U, a.X, a.Y};
        } else if (target == Chart::Classical) {
            const ClassicalState c = to_classical(a);
            o.base = c.t;
            o.state = {c.X, c.Xdot, 0.0};
        } else {
            InvertOptions io;
            io.eval = ctx.eval;
            const ModularParameter tau =
                tau_prev ? invert_lambda(a.t, *tau_prev, io) : invert_lambda(a.t, lambda_seed(a.t), io);
            branch = branch ? (i == 0 ? branch_for(ctx, tau) : branch->continued_to(tau, ctx.eval))
                            : BranchChoice::principal(tau, ctx.eval);
            const EllipticState e = to_elliptic(a, EllipticLattice(tau, ctx.eval), *branch, z_prev);
            tau_prev = tau;
            z_prev = e.z;
            o.base = tau.value();
            o.state = {e.z, e.y, 0.0};
        }
        out.samples.push_back(o);
    }
    return out;
}

CanonicalLift canonical_lift(double e, double f, const ModularParameter& tau, std::optional<BranchChoice> branch,
                             const EvalOptions& opts, double guard)
{
    const cplx t = tau.value();
    const cplx z = e * t + f;
    for (int j = 0; j < 4; ++j)
        if (lattice_distance(z - half_shift(j, t), tau) < guard)
            throw Error(ErrorKind::PoleHit, "section passes through a half-period at this tau");
    const EllipticState es{z, e, tau};
    const BranchChoice b = branch ? *branch : BranchChoice::principal(tau, opts);
    return {es, to_algebraic(es, EllipticLattice(tau, opts), b)};
}

// ---------------------------------------------------------------------------
// Residuals

namespace {

cplx window_derivative(const std::vector<cplx>& x, const std::vector<cplx>& v, std::size_t i)
{
    const std::size_t lo = i - 3;
    const auto w = fornberg_weights(x[i], std::span<const cplx>(x.data() + lo, 7), 1);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < 7; ++j)
        acc += w[1][j] * v[lo + j];
    return acc;
}

double scaled(cplx diff, cplx ref) { return std::abs(diff) / std::max(1.0, std::abs(ref)); }

template <typename Force>
double elliptic_residual(const Trajectory& tr, Force force)
{
    if (tr.samples.size() < 7)
        throw Error(ErrorKind::InsufficientSamples, "need at least 7 samples");
    const auto x = tr.bases();
    const auto z = tr.component(0);
    const auto y = tr.component(1);
    double worst = 0.0;
    for (std::size_t i = 3; i + 3 < x.size(); ++i) {
        const cplx f = force(z[i], x[i]);
        worst = std::max(worst, scaled(window_derivative(x, z, i) - y[i], y[i]));
        worst = std::max(worst, scaled(window_derivative(x, y, i) - f, f));
    }
    return worst;
}

} // namespace

double rhs_residual(const Trajectory& tr, const PainleveParams& p, const EvalOptions& opts)
{
    if (tr.chart == Chart::Elliptic)
        return elliptic_residual(tr, [&](cplx z, cplx tau) {
            return rhs_elliptic(z, EllipticLattice(ModularParameter(tau), opts), p);
        });
    if (tr.samples.size() < 7)
        throw Error(ErrorKind::InsufficientSamples, "need at least 7 samples");
    const auto x = tr.bases();
    double worst = 0.0;
    if (tr.chart == Chart::Classical) {
        const auto X = tr.component(0), V = tr.component(1);
        for (std::size_t i = 3; i + 3 < x.size(); ++i) {
            const cplx f = rhs_classical({X[i], V[i], x[i]}, p);
            worst = std::max(worst, scaled(window_derivative(x, X, i) - V[i], V[i]));
            worst = std::max(worst, scaled(window_derivative(x, V, i) - f, f));
        }
        return worst;
    }
    const auto U = tr.component(0), X = tr.component(1), Y = tr.component(2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const cplx r = Y[i] * Y[i] - X[i] * (X[i] - 1.0) * (X[i] - x[i]);
        worst = std::max(worst, scaled(r, Y[i] * Y[i]));
    }
    for (std::size_t i = 3; i + 3 < x.size(); ++i) {
        const AlgebraicRhs r = rhs_algebraic({U[i], X[i], Y[i], x[i]}, p);
        worst = std::max(worst, scaled(window_derivative(x, X, i) - r.dX, r.dX));
        worst = std::max(worst, scaled(window_derivative(x, U, i) - r.dU, r.dU));
    }
    return worst;
}

double rhs_residual(const Trajectory& tr, const GeneralizedParams& p, const EvalOptions& opts)
{
    if (tr.chart != Chart::Elliptic)
        throw Error(ErrorKind::InvalidArgument, "the torsion-shift generalization lives in the elliptic chart");
    p.validate();
    return elliptic_residual(tr, [&](cplx z, cplx tau) {
        return rhs_generalized(z, EllipticLattice(ModularParameter(tau), opts), p, 0.0);
    });
}

} // namespace pvi
