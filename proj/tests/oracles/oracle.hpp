#pragma once
// Reference implementations used only by the tests. None of them share code
// or construction with the library.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx two_pi_i{0.0, 2.0 * std::numbers::pi};

/// Lambert series for wp on Z + Z tau.
inline cplx wp_lambert(cplx z, cplx tau, int terms = 80)
{
    const cplx q = std::exp(two_pi_i * tau), w = std::exp(two_pi_i * z);
    cplx s = 1.0 / 12.0 + w / ((1.0 - w) * (1.0 - w));
    cplx qk = 1.0;
    for (int k = 1; k < terms; ++k) {
        qk *= q;
        s += qk * w / ((1.0 - qk * w) * (1.0 - qk * w)) + qk / w / ((1.0 - qk / w) * (1.0 - qk / w)) -
             2.0 * qk / ((1.0 - qk) * (1.0 - qk));
    }
    return two_pi_i * two_pi_i * s;
}

/// Derivative of the Lambert series term by term.
inline cplx wp_z_lambert(cplx z, cplx tau, int terms = 80)
{
    // d/dz [u/(1-u)^2] = 2 pi i u (1+u)/(1-u)^3 for u = c w.
    const cplx q = std::exp(two_pi_i * tau), w = std::exp(two_pi_i * z);
    auto term = [](cplx u) { return u * (1.0 + u) / ((1.0 - u) * (1.0 - u) * (1.0 - u)); };
    cplx s = term(w);
    cplx qk = 1.0;
    for (int k = 1; k < terms; ++k) {
        qk *= q;
        s += term(qk * w) - term(qk / w);
    }
    return two_pi_i * two_pi_i * two_pi_i * s;
}

/// Direct theta sum over |n| <= terms.
inline cplx theta_direct(cplx z, cplx tau, int terms = 40)
{
    cplx s = 0.0;
    for (int n = -terms; n <= terms; ++n)
        s += std::exp(cplx(0.0, pi) * double(n) * double(n) * tau + two_pi_i * double(n) * z);
    return s;
}

inline std::int64_t sigma1(int n)
{
    std::int64_t s = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0)
            s += d;
    return s;
}

/// -1/24 + sum sigma_1(n) q^n with q = exp(2 pi i tau).
inline cplx g2_divisor(cplx tau, int terms = 200)
{
    const cplx q = std::exp(two_pi_i * tau);
    cplx s = -1.0 / 24.0, qn = 1.0;
    for (int n = 1; n < terms; ++n) {
        qn *= q;
        s += double(sigma1(n)) * qn;
    }
    return s;
}

/// 2F1(1/2, 1/2; 1; t) by its power series, |t| < 1.
inline cplx f21_half(cplx t, int terms = 400)
{
    cplx s = 1.0, c = 1.0;
    for (int n = 0; n < terms; ++n) {
        const double r = (n + 0.5) * (n + 0.5) / ((n + 1.0) * (n + 1.0));
        c *= r * t;
        s += c;
    }
    return s;
}

/// Classical PVI right-hand side X'' in Greek parameters.
inline cplx pvi_classical(cplx X, cplx Xd, cplx t, const std::array<cplx, 4>& g)
{
    const cplx a = g[0], b = g[1], c = g[2], d = g[3];
    const cplx first = 0.5 * (1.0 / X + 1.0 / (X - 1.0) + 1.0 / (X - t)) * Xd * Xd;
    const cplx second = -(1.0 / t + 1.0 / (t - 1.0) + 1.0 / (X - t)) * Xd;
    const cplx pref = X * (X - 1.0) * (X - t) / (t * t * (t - 1.0) * (t - 1.0));
    const cplx force = a + b * t / (X * X) + c * (t - 1.0) / ((X - 1.0) * (X - 1.0)) +
                       d * t * (t - 1.0) / ((X - t) * (X - t));
    return first + second + pref * force;
}

/// Fixed-step RK4 of the classical equation along the segment t0 -> t1.
inline std::array<cplx, 2> rk4_classical(cplx X, cplx Xd, cplx t0, cplx t1, const std::array<cplx, 4>& g,
                                         int steps = 4000)
{
    const cplx h = (t1 - t0) / double(steps);
    cplx t = t0;
    for (int k = 0; k < steps; ++k) {
        const cplx k1x = Xd, k1v = pvi_classical(X, Xd, t, g);
        const cplx k2x = Xd + 0.5 * h * k1v, k2v = pvi_classical(X + 0.5 * h * k1x, k2x, t + 0.5 * h, g);
        const cplx k3x = Xd + 0.5 * h * k2v, k3v = pvi_classical(X + 0.5 * h * k2x, k3x, t + 0.5 * h, g);
        const cplx k4x = Xd + h * k3v, k4v = pvi_classical(X + h * k3x, k4x, t + h, g);
        X += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        Xd += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t += h;
    }
    return {X, Xd};
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Random tau in the strip |Re tau| <= 1/2 with Im tau in [lo, hi].
inline cplx random_tau(std::mt19937_64& rng, double lo = 0.5, double hi = 2.0)
{
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(lo, hi);
    return {re(rng), im(rng)};
}

} // namespace oracle
