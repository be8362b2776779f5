#include <pvi/forms.hpp>

#include <pvi/numeric.hpp>

#include <algorithm>
#include <cmath>

namespace pvi {

void TangentVector::validate() const
{
    if (chart == Chart::Classical)
        throw Error(ErrorKind::InvalidArgument, "forms are evaluated in the elliptic or algebraic chart");
    for (const cplx& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw Error(ErrorKind::InvalidArgument, "tangent vector has non-finite components");
}

namespace {

void require(const TangentVector& v, Chart c)
{
    v.validate();
    if (v.chart != c)
        throw Error(ErrorKind::InvalidArgument, "tangent vector belongs to another chart");
}

FormMatrix antisym(cplx m01, cplx m02, cplx m12)
{
    FormMatrix m{};
    m[0][1] = m01;
    m[1][0] = -m01;
    m[0][2] = m02;
    m[2][0] = -m02;
    m[1][2] = m12;
    m[2][1] = -m12;
    return m;
}

void guard_alpha_point(cplx w, const ModularParameter& tau, double guard)
{
    if (lattice_distance(w, tau) < guard)
        throw Error(ErrorKind::PoleHit, "z + T_j/2 at a lattice point");
}

/// sum_j alpha_j wp(z + T_j/2).
cplx alpha_wp_sum(cplx z, const EllipticLattice& lat, const PainleveParams& p)
{
    const cplx tau = lat.tau().value();
    cplx acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        const cplx a = p.alphas()[j];
        if (a == cplx(0.0))
            continue;
        const cplx w = z + HalfPeriodIndex(j).half_period(tau);
        guard_alpha_point(w, lat.tau(), lat.options().pole_guard);
        acc += a * lat.wp(w);
    }
    return acc;
}

void guard_algebraic(const AlgebraicState& s, double guard)
{
    const cplx X = s.X, t = s.t;
    if (std::abs(t) < guard || std::abs(t - 1.0) < guard)
        throw Error(ErrorKind::PoleHit, "t at 0 or 1");
    if (std::abs(X) < guard || std::abs(X - 1.0) < guard || std::abs(X - t) < guard || std::abs(s.Y) < guard)
        throw Error(ErrorKind::PoleHit, "X at a branch point of the curve");
}

cplx theta_logderiv_checked(const EllipticLattice& lat, cplx z)
{
    try {
        return lat.theta_logderiv(z);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::PoleAtThetaZero)
            throw Error(ErrorKind::PoleHit, "z at a zero of theta");
        throw;
    }
}

EllipticState moved(const EllipticState& s, int k, cplx h)
{
    EllipticState r = s;
    if (k == 0)
        r.y += h;
    else if (k == 1)
        r.z += h;
    else
        r.tau = ModularParameter(s.tau.value() + h);
    return r;
}

cplx curve_root(cplx X, cplx t, cplx reference)
{
    const cplx r = std::sqrt(X * (X - 1.0) * (X - t));
    return std::abs(r - reference) <= std::abs(r + reference) ? r : -r;
}

AlgebraicState moved(const AlgebraicState& s, int k, cplx h)
{
    AlgebraicState r = s;
    if (k == 0)
        r.U += h;
    else if (k == 1)
        r.X += h;
    else
        r.t += h;
    if (k != 0)
        r.Y = curve_root(r.X, r.t, s.Y);
    return r;
}

void check_step(double step)
{
    if (!(step > 1e-10) || !std::isfinite(step))
        throw Error(ErrorKind::StepUnderflow, "difference step is too small");
}

void check_tau_room(const EllipticState& s, double reach)
{
    if (s.tau.imag() - reach < kMinImagTau)
        throw Error(ErrorKind::StepUnderflow, "difference stencil leaves the region Im tau >= 0.05");
}

/// Circulation of a 1-form around the square of side h centred at s in the
/// (i, j) plane, divided by h^2.
template <class State, class Coeffs>
cplx circulation(const State& s, int i, int j, double h, const Coeffs& omega)
{
    const cplx hi = 0.5 * h;
    const cplx di = (omega(moved(s, i, hi))[j] - omega(moved(s, i, -hi))[j]) / h;
    const cplx dj = (omega(moved(s, j, hi))[i] - omega(moved(s, j, -hi))[i]) / h;
    return di - dj;
}

template <class State, class Coeffs>
cplx richardson_circulation(const State& s, int i, int j, double h, const Coeffs& omega)
{
    const cplx c1 = circulation(s, i, j, h, omega);
    const cplx c2 = circulation(s, i, j, 0.5 * h, omega);
    return (4.0 * c2 - c1) / 3.0;
}

} // namespace

cplx contract(const FormMatrix& m, const std::array<cplx, 3>& v1, const std::array<cplx, 3>& v2) noexcept
{
    cplx acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            acc += m[i][j] * v1[i] * v2[j];
    return acc;
}

FormMatrix omega_matrix(const EllipticState& s, const PainleveParams& p, const EvalOptions& opts)
{
    const EllipticLattice lat(s.tau, opts);
    // (2 pi i)^{-1} sum alpha_j wp_z = 2 pi i * (2 pi i)^{-2} sum alpha_j wp_z.
    const cplx force = kTwoPiI * rhs_elliptic(s.z, lat, p);
    return antisym(kTwoPiI, -kTwoPiI * s.y, force);
}

FormMatrix omega_matrix(const AlgebraicState& s, const PainleveParams& p, double guard)
{
    guard_algebraic(s, guard);
    const cplx U = s.U, X = s.X, Y = s.Y, t = s.t;
    const Quad& c = p.classical();
    const cplx tt1 = t * (t - 1.0);
    const cplx P = c[0] + c[1] * t / (X * X) + c[2] * (t - 1.0) / ((X - 1.0) * (X - 1.0)) +
                   c[3] * tt1 / ((X - t) * (X - t));
    return antisym(1.0 / Y, -2.0 * U / tt1, -U / (2.0 * (X - t) * Y) + P / (2.0 * tt1));
}

cplx omega_eval(const EllipticState& s, const TangentVector& v1, const TangentVector& v2, const PainleveParams& p,
                const EvalOptions& opts)
{
    require(v1, Chart::Elliptic);
    require(v2, Chart::Elliptic);
    return contract(omega_matrix(s, p, opts), v1.v, v2.v);
}

cplx omega_eval(const AlgebraicState& s, const TangentVector& v1, const TangentVector& v2, const PainleveParams& p)
{
    require(v1, Chart::Algebraic);
    require(v2, Chart::Algebraic);
    return contract(omega_matrix(s, p), v1.v, v2.v);
}

Covector omega_big_coeffs(const EllipticState& s, const PainleveParams& p, bool include_g2, const EvalOptions& opts)
{
    const EllipticLattice lat(s.tau, opts);
    const cplx y = s.y;
    const cplx L = theta_logderiv_checked(lat, s.z);
    const ThetaJet th = lat.theta_jet(s.z);
    cplx dtau = -0.5 * kTwoPiI * y * y + th.dtau / th.value + alpha_wp_sum(s.z, lat, p) / kTwoPiI;
    if (include_g2)
        dtau += kTwoPiI * eisenstein_g2(s.tau, opts);
    return {0.0, kTwoPiI * y + L, dtau};
}

Covector omega_big_coeffs(const AlgebraicState& s, const PainleveParams& p, double guard)
{
    guard_algebraic(s, guard);
    const cplx U = s.U, X = s.X, Y = s.Y, t = s.t;
    const Quad& c = p.classical();
    const cplx tt1 = t * (t - 1.0);
    const cplx Q = c[0] * X - c[1] * t / X - c[2] * (t - 1.0) / (X - 1.0) - c[3] * tt1 / (X - t);
    return {0.0, U / Y, -U * U / tt1 + Q / (2.0 * tt1)};
}

cplx omega_big_eval(const EllipticState& s, const TangentVector& v, const PainleveParams& p, bool include_g2,
                    const EvalOptions& opts)
{
    require(v, Chart::Elliptic);
    const Covector c = omega_big_coeffs(s, p, include_g2, opts);
    return c[0] * v.v[0] + c[1] * v.v[1] + c[2] * v.v[2];
}

cplx omega_big_eval(const AlgebraicState& s, const TangentVector& v, const PainleveParams& p)
{
    require(v, Chart::Algebraic);
    const Covector c = omega_big_coeffs(s, p);
    return c[0] * v.v[0] + c[1] * v.v[1] + c[2] * v.v[2];
}

Covector omega0_coeffs(const EllipticState& s, const EvalOptions& opts)
{
    const EllipticLattice lat(s.tau, opts);
    const cplx L = theta_logderiv_checked(lat, s.z);
    const ThetaJet th = lat.theta_jet(s.z);
    const cplx log_zz = th.dzz / th.value - L * L;
    const cplx y = s.y;
    return {0.0, kTwoPiI * y + L, -0.5 * kTwoPiI * y * y + th.dtau / th.value + kI / (4.0 * kPi) * log_zz};
}

cplx omega0_eval(const EllipticState& s, const TangentVector& v, const EvalOptions& opts)
{
    require(v, Chart::Elliptic);
    const Covector c = omega0_coeffs(s, opts);
    return c[0] * v.v[0] + c[1] * v.v[1] + c[2] * v.v[2];
}

cplx omega_big_gauge(const ModularParameter& tau, const PainleveParams& p, const EvalOptions& opts)
{
    const HalfPeriodValues e = half_period_values(tau, opts);
    const Quad& a = p.alphas();
    return ((a[0] + a[1]) * e.e1 + a[2] * e.e2 + (a[3] - 0.5) * e.e3) / kTwoPiI;
}

TangentVector pushforward(const EllipticState& s, const TangentVector& v, const BranchChoice& branch,
                          const EvalOptions& opts, double step)
{
    require(v, Chart::Elliptic);
    check_step(step);
    check_tau_room(s, step * std::abs(v.v[2]));
    auto image = [&](double h) {
        const EllipticState m{s.z + h * v.v[1], s.y + h * v.v[0], ModularParameter(s.tau.value() + h * v.v[2])};
        const AlgebraicState a = to_algebraic(m, branch.continued_to(m.tau, opts), opts);
        return std::array<cplx, 3>{a.U, a.X, a.t};
    };
    auto central = [&](double h) {
        const auto plus = image(h), minus = image(-h);
        std::array<cplx, 3> d{};
        for (int k = 0; k < 3; ++k)
            d[k] = (plus[k] - minus[k]) / (2.0 * h);
        return d;
    };
    const auto d1 = central(step), d2 = central(0.5 * step);
    TangentVector out{Chart::Algebraic, {}};
    for (int k = 0; k < 3; ++k)
        out.v[k] = (4.0 * d2[k] - d1[k]) / 3.0;
    return out;
}

std::pair<int, int> plane_indices(CoordinatePlane plane) noexcept
{
    switch (plane) {
    case CoordinatePlane::First:
        return {0, 1};
    case CoordinatePlane::Second:
        return {0, 2};
    case CoordinatePlane::Third:
        break;
    }
    return {1, 2};
}

cplx exactness_residual(const EllipticState& s, const PainleveParams& p, CoordinatePlane plane,
                        const ExactnessOptions& opts)
{
    check_step(opts.step);
    const auto [i, j] = plane_indices(plane);
    if (i == 2 || j == 2)
        check_tau_room(s, opts.step);
    auto big = [&](const EllipticState& st) { return omega_big_coeffs(st, p, opts.include_g2, opts.eval); };
    const cplx d_omega = richardson_circulation(s, i, j, opts.step, big);
    return d_omega - omega_matrix(s, p, opts.eval)[i][j];
}

cplx exactness_residual(const AlgebraicState& s, const PainleveParams& p, CoordinatePlane plane,
                        const ExactnessOptions& opts)
{
    check_step(opts.step);
    const auto [i, j] = plane_indices(plane);
    auto big = [&](const AlgebraicState& st) { return omega_big_coeffs(st, p); };
    const cplx d_omega = richardson_circulation(s, i, j, opts.step, big);
    return d_omega - omega_matrix(s, p)[i][j];
}

cplx closedness_residual(const EllipticState& s, const PainleveParams& p, const ExactnessOptions& opts)
{
    check_step(opts.step);
    check_tau_room(s, opts.step);
    // d omega = (d_y M_{z tau} - d_z M_{y tau} + d_tau M_{y z}) dy^dz^dtau.
    auto derivative = [&](int k, int a, int b) {
        auto coeff = [&](double h) { return omega_matrix(moved(s, k, h), p, opts.eval)[a][b]; };
        const double h = opts.step;
        const cplx d1 = (coeff(h) - coeff(-h)) / (2.0 * h);
        const cplx d2 = (coeff(0.5 * h) - coeff(-0.5 * h)) / h;
        return (4.0 * d2 - d1) / 3.0;
    };
    return derivative(0, 1, 2) - derivative(1, 0, 2) + derivative(2, 0, 1);
}

namespace {

using Jacobian = std::array<std::array<cplx, 3>, 3>;

std::array<cplx, 3> as_coords(const EllipticState& s) { return {s.y, s.z, s.tau.value()}; }

/// J[r][k] = d (g s)_r / d x_k.
Jacobian action_jacobian(const EllipticState& s, const ModularElement& g, double step)
{
    check_step(step);
    check_tau_room(s, step);
    Jacobian J{};
    for (int k = 0; k < 3; ++k) {
        auto central = [&](double h) {
            const auto plus = as_coords(gamma2_act(g, moved(s, k, h)));
            const auto minus = as_coords(gamma2_act(g, moved(s, k, -h)));
            std::array<cplx, 3> d{};
            for (int r = 0; r < 3; ++r)
                d[r] = (plus[r] - minus[r]) / (2.0 * h);
            return d;
        };
        const auto d1 = central(step), d2 = central(0.5 * step);
        for (int r = 0; r < 3; ++r)
            J[r][k] = (4.0 * d2[r] - d1[r]) / 3.0;
    }
    return J;
}

} // namespace

double invariance_residual(const EllipticState& s, const PainleveParams& p, const ModularElement& g,
                           const EvalOptions& opts, double step)
{
    if (g == ModularElement::identity())
        return 0.0;
    const EllipticState gs = gamma2_act(g, s);
    if (gs.tau.imag() < kMinImagTau)
        throw Error(ErrorKind::NonConvergent, "transformed tau has Im tau < 0.05");
    const Jacobian J = action_jacobian(s, g, step);
    const FormMatrix at_image = omega_matrix(gs, p, opts);
    const FormMatrix here = omega_matrix(s, p, opts);
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            cplx pulled = 0.0;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    pulled += J[r][a] * at_image[r][c] * J[c][b];
            worst = std::max(worst, std::abs(pulled - here[a][b]));
        }
    return worst;
}

double omega_big_invariance_residual(const EllipticState& s, const PainleveParams& p, const ModularElement& g,
                                     bool include_g2, const EvalOptions& opts, double step)
{
    if (g == ModularElement::identity())
        return 0.0;
    const EllipticState gs = gamma2_act(g, s);
    if (gs.tau.imag() < kMinImagTau)
        throw Error(ErrorKind::NonConvergent, "transformed tau has Im tau < 0.05");
    const Jacobian J = action_jacobian(s, g, step);
    const Covector at_image = omega_big_coeffs(gs, p, include_g2, opts);
    const Covector here = omega_big_coeffs(s, p, include_g2, opts);
    double worst = 0.0;
    for (int a = 0; a < 3; ++a) {
        cplx pulled = 0.0;
        for (int r = 0; r < 3; ++r)
            pulled += at_image[r] * J[r][a];
        worst = std::max(worst, std::abs(pulled - here[a]));
    }
    return worst;
}

double null_foliation_residual(const Trajectory& tr, const PainleveParams& p, const EvalOptions& opts)
{
    if (tr.chart == Chart::Classical)
        return null_foliation_residual(convert_trajectory(tr, Chart::Algebraic), p, opts);
    if (tr.size() < 7)
        throw Error(ErrorKind::InsufficientSamples, "need at least 7 samples");
    const std::vector<cplx> base = tr.bases();
    // Elliptic samples hold (z, y); algebraic ones (U, X, Y).
    const bool ell = tr.chart == Chart::Elliptic;
    const std::vector<cplx> first = tr.component(ell ? 1 : 0);
    const std::vector<cplx> second = tr.component(ell ? 0 : 1);
    double worst = 0.0;
    for (std::size_t i = 3; i + 3 < tr.size(); ++i) {
        const std::span<const cplx> nodes(base.data() + i - 3, 7);
        const cplx d0 = sampled_derivative(nodes, std::span<const cplx>(first.data() + i - 3, 7), base[i], 1);
        const cplx d1 = sampled_derivative(nodes, std::span<const cplx>(second.data() + i - 3, 7), base[i], 1);
        const std::array<cplx, 3> T{d0, d1, 1.0};
        const FormMatrix M = ell ? omega_matrix(tr.elliptic(i), p, opts) : omega_matrix(tr.algebraic(i), p);
        for (int k = 0; k < 3; ++k) {
            std::array<cplx, 3> e{};
            e[k] = 1.0;
            worst = std::max(worst, std::abs(contract(M, T, e)));
        }
    }
    return worst;
}

cplx divisor_restriction(cplx z, const ModularParameter& tau, const PainleveParams& p, const EvalOptions& opts)
{
    const EllipticLattice lat(tau, opts);
    const cplx y = -theta_logderiv_checked(lat, z) / kTwoPiI;
    // D is the zero set of F = 2 pi i y + L(z, tau), L = theta_z/theta.
    const double h = 1e-3 * std::min(1.0, tau.imag());
    const cplx Lz = central_derivatives([&](cplx w) { return theta_logderiv_checked(lat, w); }, z, h).d1;
    const cplx Lt = central_derivatives(
                        [&](cplx w) { return EllipticLattice(ModularParameter(w), opts).theta_logderiv(z); },
                        tau.value(), 0.5 * h)
                        .d1;
    const std::array<cplx, 3> v1{-Lz / kTwoPiI, 1.0, 0.0}, v2{-Lt / kTwoPiI, 0.0, 1.0};
    return contract(omega_matrix(EllipticState{z, y, tau}, p, opts), v1, v2);
}

cplx divisor_restriction(cplx X, cplx t, const PainleveParams& p)
{
    const AlgebraicState s{0.0, X, std::sqrt(X * (X - 1.0) * (X - t)), t};
    return contract(omega_matrix(s, p), {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0});
}

cplx vertical_part_residual(const EllipticState& s, const TangentVector& v1, const TangentVector& v2,
                            const EvalOptions& opts, double step)
{
    require(v1, Chart::Elliptic);
    require(v2, Chart::Elliptic);
    if (v1.v[2] != cplx(0.0) || v2.v[2] != cplx(0.0))
        throw Error(ErrorKind::InvalidArgument, "vertical vectors have no dtau component");
    check_step(step);
    const EllipticLattice lat(s.tau, opts);
    auto nu = [&](const EllipticState& st) {
        return Covector{0.0, kTwoPiI * st.y + theta_logderiv_checked(lat, st.z), 0.0};
    };
    const cplx d_nu = richardson_circulation(s, 0, 1, step, nu);
    const cplx wedge = v1.v[0] * v2.v[1] - v2.v[0] * v1.v[1];
    return omega_eval(s, v1, v2, PainleveParams(), opts) - d_nu * wedge;
}

LaurentFit omega_j_laurent(const HalfPeriodIndex& j, const ModularParameter& tau, double radius,
                           const EvalOptions& opts)
{
    if (!(radius > 0.0))
        throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    constexpr int kPoints = 16;
    const EllipticLattice lat(tau, opts);
    const cplx shift = j.half_period(tau.value());
    LaurentFit fit{0.0, 0.0, 0.0};
    for (int k = 0; k < kPoints; ++k) {
        const cplx w = std::polar(radius, 2.0 * kPi * k / kPoints);
        const cplx z = -shift + w;
        const cplx f = kKodairaSpencer / kTwoPiI * lat.wp_z(z + shift);
        fit.cubic += f * w * w * w;
        fit.quadratic += f * w * w;
        fit.simple += f * w;
    }
    fit.cubic /= static_cast<double>(kPoints);
    fit.quadratic /= static_cast<double>(kPoints);
    fit.simple /= static_cast<double>(kPoints);
    return fit;
}

cplx omega_j_residue(const HalfPeriodIndex& j, const ModularParameter& tau, const EvalOptions& opts)
{
    return omega_j_laurent(j, tau, 1e-2, opts).cubic;
}

} // namespace pvi
