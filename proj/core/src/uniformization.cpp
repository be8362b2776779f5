#include <pvi/uniformization.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pvi {

namespace {

bool near_root(cplx b, cplx e21) { return std::abs(b * b - e21) <= 1e-8 * std::max(std::abs(e21), 1e-300); }

cplx e21_of(const ModularParameter& tau, const EvalOptions& opts)
{
    const HalfPeriodValues e = half_period_values(tau, opts);
    return e.e2 - e.e1;
}

} // namespace

BranchChoice::BranchChoice(cplx sqrt_e21, const ModularParameter& tau, const EvalOptions& opts) : b_(sqrt_e21)
{
    if (!near_root(b_, e21_of(tau, opts)))
        throw Error(ErrorKind::InvalidArgument, "branch value does not square to e2 - e1");
}

BranchChoice BranchChoice::principal(const ModularParameter& tau, const EvalOptions& opts)
{
    return BranchChoice(std::sqrt(e21_of(tau, opts)));
}

BranchChoice BranchChoice::continued_to(const ModularParameter& new_tau, const EvalOptions& opts) const
{
    const cplx r = std::sqrt(e21_of(new_tau, opts));
    return BranchChoice(std::abs(r - b_) <= std::abs(r + b_) ? r : -r);
}

CurvePoint phi(cplx z, const EllipticLattice& lattice, const BranchChoice& branch)
{
    if (lattice_distance(z, lattice.tau()) < lattice.options().pole_guard)
        throw Error(ErrorKind::PointAtInfinity, "z is a lattice point; its image is the point at infinity");
    const HalfPeriodValues& e = lattice.half_period_values();
    const cplx e21 = e.e2 - e.e1;
    const auto w = lattice.wp_pair(z);
    const cplx b = branch.value();
    return {(w.wp - e.e1) / e21, w.wp_z / (2.0 * b * b * b), (e.e3 - e.e1) / e21};
}

CurvePoint phi(cplx z, const ModularParameter& tau, const BranchChoice& branch, const EvalOptions& opts)
{
    return phi(z, EllipticLattice(tau, opts), branch);
}

cplx modular_lambda(const ModularParameter& tau, const EvalOptions& opts)
{
    const HalfPeriodValues e = half_period_values(tau, opts);
    return (e.e3 - e.e1) / (e.e2 - e.e1);
}

cplx modular_lambda_derivative(const ModularParameter& tau, const EvalOptions& opts)
{
    const HalfPeriodValues e = half_period_values(tau, opts);
    const cplx t = (e.e3 - e.e1) / (e.e2 - e.e1);
    return -(kI / kPi) * (e.e2 - e.e1) * t * (t - 1.0);
}

ModularParameter lambda_seed(cplx t)
{
    if (std::abs(t) < 1e-300 || std::abs(t - 1.0) < 1e-300)
        throw Error(ErrorKind::InvalidArgument, "t must avoid 0 and 1");
    const cplx r = std::pow(t, 0.25);
    const cplx eps = 0.5 * (1.0 - r) / (1.0 + r);
    const cplx e4 = eps * eps * eps * eps;
    const cplx q = eps * (1.0 + e4 * (2.0 + e4 * (15.0 + e4 * (150.0 + e4 * 1707.0))));
    cplx tau = std::log(q) / (kI * kPi);
    if (tau.imag() < kMinImagTau)
        tau = {tau.real(), kMinImagTau};
    return ModularParameter(tau);
}

ModularParameter invert_lambda(cplx t, const ModularParameter& tau_seed, const InvertOptions& opts)
{
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag()) || std::abs(t) < 1e-14 || std::abs(t - 1.0) < 1e-14)
        throw Error(ErrorKind::InvalidArgument, "t must avoid 0 and 1");
    if (tau_seed.imag() < kMinImagTau)
        throw Error(ErrorKind::InvalidArgument, "seed must have Im tau >= 0.05");

    const double scale = std::max(1.0, std::abs(t));
    auto eval = [&](cplx tau, cplx& lam, cplx& dlam) -> bool {
        if (tau.imag() < kMinImagTau)
            return false;
        const HalfPeriodValues e = half_period_values(ModularParameter(tau), opts.eval);
        lam = (e.e3 - e.e1) / (e.e2 - e.e1);
        dlam = -(kI / kPi) * (e.e2 - e.e1) * lam * (lam - 1.0);
        return true;
    };

    cplx tau = tau_seed.value();
    cplx lam, dlam;
    eval(tau, lam, dlam);
    double res = std::abs(lam - t) / scale;
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (res <= opts.tolerance)
            return ModularParameter(tau);
        cplx step = -(lam - t) / dlam;
        // Keep the step on the scale of the lattice so the iteration cannot leap
        // into a distant Gamma(2)-translate.
        const double cap = 0.5 * std::max(tau.imag(), kMinImagTau);
        if (std::abs(step) > cap)
            step *= cap / std::abs(step);
        bool accepted = false;
        for (int k = 0; k < 40; ++k) {
            cplx l2, d2;
            const cplx cand = tau + step;
            if (eval(cand, l2, d2)) {
                const double r2 = std::abs(l2 - t) / scale;
                if (r2 < res || r2 <= opts.tolerance) {
                    tau = cand;
                    lam = l2;
                    dlam = d2;
                    res = r2;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted)
            break;
    }
    if (res <= opts.tolerance * 10.0)
        return ModularParameter(tau);
    throw Error(ErrorKind::NoConvergence, "lambda inversion did not converge; supply a better seed");
}

namespace {

cplx nearest_translate(cplx z, cplx target, const ModularParameter& tau)
{
    return target + lattice_reduce(z - target, tau).z_reduced;
}

} // namespace

cplx z_from_point(const CurvePoint& p, const EllipticLattice& lattice, const BranchChoice& branch,
                  std::optional<cplx> z_seed, const PreimageOptions& opts)
{
    const ModularParameter& tau = lattice.tau();
    const HalfPeriodValues& e = lattice.half_period_values();
    const cplx e21 = e.e2 - e.e1;
    const cplx t_here = (e.e3 - e.e1) / e21;
    if (std::abs(t_here - p.t) > opts.tau_consistency * std::max(1.0, std::abs(p.t)))
        throw Error(ErrorKind::InconsistentTau, "tau does not match the curve parameter t");
    if (!std::isfinite(std::abs(p.X)) || std::abs(p.X) > 1e15)
        throw Error(ErrorKind::PointAtInfinity, "point at infinity has preimage z = 0");

    const cplx tv = tau.value();
    const double xscale = std::max(1.0, std::abs(p.X));
    const double yscale = std::max(1.0, std::pow(std::abs(p.X), 1.5));

    // Branch points: return the half-period itself.
    if (std::abs(p.Y) <= 1e-12 * yscale) {
        const cplx cands[3] = {0.0, 1.0, p.t};
        const cplx halves[3] = {0.5, 0.5 * tv, 0.5 * (1.0 + tv)};
        int best = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(p.X - cands[j]) < std::abs(p.X - cands[best]))
                best = j;
        return z_seed ? nearest_translate(halves[best], *z_seed, tau) : halves[best];
    }

    const cplx target = e.e1 + p.X * e21;
    const cplx b3 = branch.value() * branch.value() * branch.value();
    auto mismatch = [&](cplx z) {
        const auto w = lattice.wp_pair(z);
        return std::abs((w.wp - target) / e21) / xscale + std::abs(w.wp_z / (2.0 * b3) - p.Y) / yscale;
    };

    cplx z;
    if (z_seed) {
        z = *z_seed;
    } else {
        constexpr int kGrid = 16;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kGrid; ++i)
            for (int j = 0; j < kGrid; ++j) {
                const double s = -0.5 + (i + 0.5) / kGrid;
                const double u = -0.5 + (j + 0.5) / kGrid;
                const cplx c = s + u * tv;
                const double m = mismatch(c);
                if (m < best) {
                    best = m;
                    z = c;
                }
            }
    }

    const double cap = 0.25 * std::min(1.0, std::abs(tv));
    auto residual = [&](cplx zz) { return std::abs(lattice.wp(zz) - target); };
    double res = std::numeric_limits<double>::infinity();
    try {
        res = residual(z);
    } catch (const Error&) {
        z += 1e-3 * (1.0 + tv);
        res = residual(z);
    }
    bool converged = false;
    for (int it = 0; it < opts.max_iterations && !converged; ++it) {
        const auto w = lattice.wp_pair(z);
        cplx step = -(w.wp - target) / w.wp_z;
        if (!std::isfinite(std::abs(step)))
            break;
        if (std::abs(step) > cap)
            step *= cap / std::abs(step);
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            try {
                const double r2 = residual(z + step);
                if (r2 < res || std::abs(step) <= opts.tolerance * (1.0 + std::abs(z))) {
                    z += step;
                    res = r2;
                    accepted = true;
                    break;
                }
            } catch (const Error&) {
            }
            step *= 0.5;
        }
        if (!accepted || std::abs(step) <= opts.tolerance * (1.0 + std::abs(z)))
            converged = true;
    }
    if (res > 1e-8 * (1.0 + std::abs(target)))
        throw Error(ErrorKind::NoConvergence, "preimage iteration did not converge");

    const cplx yz = lattice.wp_z(z) / (2.0 * b3);
    if (std::abs(yz + p.Y) < std::abs(yz - p.Y))
        z = -z;
    return z_seed ? nearest_translate(z, *z_seed, tau) : lattice_reduce(z, tau).z_reduced;
}

cplx z_from_point(const CurvePoint& p, const ModularParameter& tau, const BranchChoice& branch,
                  std::optional<cplx> z_seed, const PreimageOptions& opts)
{
    return z_from_point(p, EllipticLattice(tau, opts.eval), branch, z_seed, opts);
}

cplx pullback_residual(cplx z, const ModularParameter& tau, const BranchChoice& branch, const EvalOptions& opts)
{
    const EllipticLattice lat(tau, opts);
    const HalfPeriodValues& e = lat.half_period_values();
    const CurvePoint p = phi(z, lat, branch);
    const cplx dxdz = lat.wp_z(z) / (e.e2 - e.e1);
    return dxdz / p.Y - 2.0 * branch.value();
}

PeriodPair curve_periods(const ModularParameter& tau, const BranchChoice& branch)
{
    const cplx p1 = 2.0 * branch.value();
    return {p1, tau.value() * p1};
}

cplx abelian_integral(const CurvePoint& p, const ModularParameter& tau, const BranchChoice& branch,
                      std::optional<cplx> z_seed, const PreimageOptions& opts)
{
    const cplx z = z_from_point(p, tau, branch, z_seed, opts);
    return 2.0 * branch.value() * lattice_reduce(z, tau).z_reduced;
}

} // namespace pvi
