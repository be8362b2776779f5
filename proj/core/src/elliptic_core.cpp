#include <pvi/elliptic_core.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pvi {

namespace {

std::string describe(cplx z)
{
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

} // namespace

ModularParameter::ModularParameter(cplx tau) : tau_(tau)
{
    if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
        throw Error(ErrorKind::InvalidArgument, "tau must lie in the upper half-plane, got " + describe(tau));
}

void EvalOptions::validate() const
{
    if (!(tolerance > 0.0))
        throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
    if (max_terms < 1)
        throw Error(ErrorKind::InvalidArgument, "max_terms must be at least 1");
    if (!(pole_guard >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "pole_guard must be non-negative");
}

HalfPeriodIndex::HalfPeriodIndex(int j) : j_(j)
{
    if (j < 0 || j > 3)
        throw Error(ErrorKind::InvalidArgument, "half-period index must be in {0,1,2,3}");
}

cplx HalfPeriodValues::operator[](int i) const
{
    switch (i) {
    case 1: return e1;
    case 2: return e2;
    case 3: return e3;
    default: throw Error(ErrorKind::InvalidArgument, "e_i index must be in {1,2,3}");
    }
}

LatticeReducedPoint lattice_reduce(cplx z, const ModularParameter& tau)
{
    const cplx t = tau.value();
    const double u = z.imag() / t.imag();
    const double m = std::floor(u + 0.5);
    const cplx z1 = z - m * t;
    const double s = z1.real() - (u - m) * t.real();
    const double n = std::floor(s + 0.5);
    return {z1 - n, static_cast<int>(m), static_cast<int>(n)};
}

double lattice_distance(cplx z, const ModularParameter& tau)
{
    const cplx zr = lattice_reduce(z, tau).z_reduced;
    const cplx t = tau.value();
    double best = std::numeric_limits<double>::infinity();
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            best = std::min(best, std::abs(zr - (static_cast<double>(a) + static_cast<double>(b) * t)));
    return best;
}

EllipticLattice::EllipticLattice(const ModularParameter& tau, const EvalOptions& opts) : tau_(tau), opts_(opts)
{
    opts_.validate();
    if (tau.imag() < kMinImagTau)
        throw Error(ErrorKind::NonConvergent, "Im tau below " + std::to_string(kMinImagTau));

    const cplx t = tau.value();
    const double im = tau.imag();
    // Coefficients are generated until they fall below tolerance even at the
    // worst growth allowed inside the fundamental cell.
    for (int n = 0;; ++n) {
        if (n >= opts_.max_terms)
            throw Error(ErrorKind::NonConvergent, "odd theta series exhausted max_terms");
        const double h = n + 0.5;
        const cplx c = std::exp(kI * kPi * t * h * h) * (n % 2 == 0 ? 1.0 : -1.0);
        odd_coeffs_.push_back(c);
        const double k = (2 * n + 1) * kPi;
        const double bound = std::exp(-kPi * im * (h * h - h)) * k * k * k;
        if (n > 0 && bound < opts_.tolerance * 1e-3)
            break;
    }
    for (int n = 1;; ++n) {
        if (n >= opts_.max_terms)
            throw Error(ErrorKind::NonConvergent, "theta series exhausted max_terms");
        const double nn = static_cast<double>(n) * n;
        theta_coeffs_.push_back(std::exp(kI * kPi * t * nn));
        const double bound = std::exp(-kPi * im * (nn - n)) * 4.0 * kPi * kPi * nn;
        if (bound < opts_.tolerance * 1e-3)
            break;
    }

    cplx s1{}, s3{};
    for (std::size_t n = 0; n < odd_coeffs_.size(); ++n) {
        const double k = (2.0 * n + 1.0) * kPi;
        s1 += odd_coeffs_[n] * k;
        s3 -= odd_coeffs_[n] * (k * k * k);
    }
    laurent_constant_ = s3 / (3.0 * s1);

    e_.e1 = wp(0.5);
    e_.e2 = wp(0.5 * t);
    e_.e3 = wp(0.5 * (1.0 + t));
}

EllipticLattice::OddJet EllipticLattice::odd_jet(cplx zr) const
{
    const cplx w = std::exp(kI * kPi * zr);
    const cplx w2 = w * w;
    const cplx w2inv = 1.0 / w2;
    cplx e = w;
    cplx einv = 1.0 / w;
    OddJet j{};
    for (std::size_t n = 0; n < odd_coeffs_.size(); ++n) {
        const double k = (2.0 * n + 1.0) * kPi;
        const cplx sn = (e - einv) / (2.0 * kI);
        const cplx cs = 0.5 * (e + einv);
        const cplx c = odd_coeffs_[n];
        j.s += c * sn;
        j.s1 += c * (k * cs);
        j.s2 -= c * (k * k * sn);
        j.s3 -= c * (k * k * k * cs);
        e *= w2;
        einv *= w2inv;
    }
    return j;
}

cplx EllipticLattice::reduce_checked(cplx z) const
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorKind::InvalidArgument, "z is not finite");
    if (lattice_distance(z, tau_) < opts_.pole_guard)
        throw Error(ErrorKind::PoleAtLatticePoint, "z = " + describe(z) + " is a lattice point");
    return lattice_reduce(z, tau_).z_reduced;
}

EllipticLattice::WpPair EllipticLattice::wp_pair(cplx z) const
{
    const OddJet j = odd_jet(reduce_checked(z));
    const cplx r1 = j.s1 / j.s;
    const cplx r2 = j.s2 / j.s;
    const cplx r3 = j.s3 / j.s;
    return {-(r2 - r1 * r1) + laurent_constant_, -(r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1)};
}

cplx EllipticLattice::wp(cplx z) const { return wp_pair(z).wp; }

cplx EllipticLattice::wp_z(cplx z) const { return wp_pair(z).wp_z; }

ThetaJet EllipticLattice::theta_jet_reduced(cplx zr) const
{
    const cplx w = std::exp(kTwoPiI * zr);
    const cplx winv = 1.0 / w;
    cplx p = 1.0, pinv = 1.0;
    ThetaJet j{1.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < theta_coeffs_.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        p *= w;
        pinv *= winv;
        const cplx q = theta_coeffs_[i];
        const cplx even = q * (p + pinv);
        const cplx odd = q * (p - pinv);
        j.value += even;
        j.dz += kTwoPiI * n * odd;
        j.dzz += (kTwoPiI * n) * (kTwoPiI * n) * even;
        j.dtau += kI * kPi * n * n * even;
    }
    return j;
}

ThetaJet EllipticLattice::theta_jet(cplx z) const
{
    const LatticeReducedPoint r = lattice_reduce(z, tau_);
    const ThetaJet j = theta_jet_reduced(r.z_reduced);
    if (r.shift_m == 0)
        return j;
    // theta(z) = exp(pi i m^2 tau - 2 pi i m z) theta(z - m tau - n)
    const double m = r.shift_m;
    const cplx t = tau_.value();
    const cplx f = std::exp(kI * kPi * m * m * t - kTwoPiI * m * z);
    const cplx a = kTwoPiI * m;
    return {f * j.value, f * (j.dz - a * j.value), f * (j.dzz - 2.0 * a * j.dz + a * a * j.value),
            f * (kI * kPi * m * m * j.value + j.dtau - m * j.dz)};
}

cplx EllipticLattice::theta(cplx z) const { return theta_jet(z).value; }

cplx EllipticLattice::theta_logderiv(cplx z) const
{
    const cplx t = tau_.value();
    if (lattice_distance(z - 0.5 * (1.0 + t), tau_) < opts_.pole_guard)
        throw Error(ErrorKind::PoleAtThetaZero, "z = " + describe(z) + " is a zero of theta");
    const LatticeReducedPoint r = lattice_reduce(z, tau_);
    const ThetaJet j = theta_jet_reduced(r.z_reduced);
    return j.dz / j.value - kTwoPiI * static_cast<double>(r.shift_m);
}

cplx wp(cplx z, const ModularParameter& tau, const EvalOptions& opts) { return EllipticLattice(tau, opts).wp(z); }

cplx wp_z(cplx z, const ModularParameter& tau, const EvalOptions& opts)
{
    return EllipticLattice(tau, opts).wp_z(z);
}

HalfPeriodValues half_period_values(const ModularParameter& tau, const EvalOptions& opts)
{
    return EllipticLattice(tau, opts).half_period_values();
}

cplx theta(cplx z, const ModularParameter& tau, const EvalOptions& opts)
{
    return EllipticLattice(tau, opts).theta(z);
}

ThetaJet theta_jet(cplx z, const ModularParameter& tau, const EvalOptions& opts)
{
    return EllipticLattice(tau, opts).theta_jet(z);
}

cplx theta_logderiv(cplx z, const ModularParameter& tau, const EvalOptions& opts)
{
    return EllipticLattice(tau, opts).theta_logderiv(z);
}

cplx theta_v(cplx z, const ModularParameter& tau, const EvalOptions& opts)
{
    return -theta_logderiv(z, tau, opts) / kTwoPiI;
}

std::int64_t eisenstein_g2_coefficient(int n)
{
    if (n < 1)
        throw Error(ErrorKind::InvalidArgument, "divisor sum needs n >= 1");
    std::int64_t s = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        s += d;
        if (d * d != n)
            s += n / d;
    }
    return s;
}

cplx eisenstein_g2(const ModularParameter& tau, const EvalOptions& opts)
{
    opts.validate();
    if (tau.imag() < kMinImagTau)
        throw Error(ErrorKind::NonConvergent, "Im tau below " + std::to_string(kMinImagTau));
    const cplx q = std::exp(kTwoPiI * tau.value());
    const double aq = std::abs(q);
    cplx sum = -1.0 / 24.0;
    cplx qn = 1.0;
    for (int n = 1;; ++n) {
        if (n > opts.max_terms)
            throw Error(ErrorKind::NonConvergent, "G2 series exhausted max_terms");
        qn *= q;
        sum += static_cast<double>(eisenstein_g2_coefficient(n)) * qn;
        const double nn = static_cast<double>(n) + 1.0;
        // sigma_1(k) <= k^2 and the tail is geometric in |q|
        if (nn * nn * std::pow(aq, nn) / (1.0 - aq) < opts.tolerance * 1e-2)
            break;
    }
    return sum;
}

cplx heat_residual(cplx z, const ModularParameter& tau, const EvalOptions& opts)
{
    const ThetaJet j = theta_jet(z, tau, opts);
    return j.dtau - j.dzz / (4.0 * kPi * kI);
}

HalfPeriodDerivatives half_period_derivatives(const ModularParameter& tau, const EvalOptions& opts,
                                              double max_relative_error)
{
    const cplx t = tau.value();
    const double h0 = 4e-3 * std::min(1.0, tau.imag());
    auto central = [&](double h) {
        const HalfPeriodValues p = half_period_values(ModularParameter(t + h), opts);
        const HalfPeriodValues m = half_period_values(ModularParameter(t - h), opts);
        return std::array<cplx, 3>{(p.e1 - m.e1) / (2 * h), (p.e2 - m.e2) / (2 * h), (p.e3 - m.e3) / (2 * h)};
    };
    const auto d1 = central(h0);
    const auto d2 = central(h0 / 2);
    const auto d4 = central(h0 / 4);
    std::array<cplx, 3> out{};
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        const cplx r1 = (4.0 * d2[i] - d1[i]) / 3.0;
        const cplx r2 = (4.0 * d4[i] - d2[i]) / 3.0;
        out[i] = (16.0 * r2 - r1) / 15.0;
        err = std::max(err, std::abs(out[i] - r2));
        scale = std::max(scale, std::abs(out[i]));
    }
    if (err > max_relative_error * std::max(scale, 1e-300))
        throw Error(ErrorKind::StepUnderflow, "half-period derivative error estimate " + std::to_string(err) +
                                                  " exceeds requested accuracy");
    return {{out[0], out[1], out[2]}, err};
}

cplx constant_c(const ModularParameter& tau, const EvalOptions& opts)
{
    const HalfPeriodValues e = half_period_values(tau, opts);
    const HalfPeriodValues d = half_period_derivatives(tau, opts).values;
    const cplx d21 = e.e2 - e.e1, d31 = e.e3 - e.e1, d32 = e.e3 - e.e2;
    const cplx wr = e.e1 * d.e2 - e.e2 * d.e1;
    return d21 * d21 * d31 * d31 * d32 * d32 / (wr * wr);
}

} // namespace pvi
