#include <doctest.h>

#include "oracles/frozen.hpp"
#include "oracles/oracle.hpp"

#include <pvi/elliptic_core.hpp>
#include <pvi/error.hpp>

using namespace pvi;

namespace {

bool throws_kind(ErrorKind k, const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == k;
    }
    return false;
}

const std::array<std::pair<cplx, cplx>, 3> kFrozenPoints{{{oracle::wp_z0, oracle::wp_tau0},
                                                          {oracle::wp_z1, oracle::wp_tau1},
                                                          {oracle::wp_z2, oracle::wp_tau2}}};

} // namespace

TEST_CASE("wp and wp_z agree with frozen reference values")
{
    const cplx wpv[] = {oracle::wp_value0, oracle::wp_value1, oracle::wp_value2};
    const cplx wpzv[] = {oracle::wpz_value0, oracle::wpz_value1, oracle::wpz_value2};
    const cplx thv[] = {oracle::theta_value0, oracle::theta_value1, oracle::theta_value2};
    for (int k = 0; k < 3; ++k) {
        const auto [z, t] = kFrozenPoints[k];
        const ModularParameter tau(t);
        CHECK(oracle::rel(wp(z, tau), wpv[k]) < 1e-12);
        CHECK(oracle::rel(wp_z(z, tau), wpzv[k]) < 1e-11);
        CHECK(oracle::rel(theta(z, tau), thv[k]) < 1e-13);
    }
}

TEST_CASE("wp matches the Lambert series at random points")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 40; ++k) {
        const cplx t = oracle::random_tau(rng, 0.6, 1.8);
        const ModularParameter tau(t);
        const cplx z = u(rng) + u(rng) * t;
        if (lattice_distance(z, tau) < 0.05)
            continue;
        // The Lambert series needs |Im z| < Im tau; reduce it ourselves.
        const cplx zr = lattice_reduce(z, tau).z_reduced;
        CHECK(oracle::rel(wp(z, tau), oracle::wp_lambert(zr, t)) < 1e-11);
        CHECK(oracle::rel(wp_z(z, tau), oracle::wp_z_lambert(zr, t)) < 1e-10);
    }
}

TEST_CASE("theta matches the direct sum and its quasi-periodicity")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 30; ++k) {
        const cplx t = oracle::random_tau(rng);
        const ModularParameter tau(t);
        const cplx z = u(rng) + u(rng) * t;
        CHECK(oracle::rel(theta(z, tau), oracle::theta_direct(z, t)) < 1e-12);
        for (int m = -2; m <= 2; ++m) {
            const cplx factor = std::exp(-kI * kPi * double(m * m) * t - kTwoPiI * double(m) * z);
            const cplx lhs = theta(z + double(m) * t + 1.0, tau);
            CHECK(std::abs(lhs - factor * theta(z, tau)) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("v shifts by m under z -> z + m tau + n")
{
    const ModularParameter tau({0.15, 0.9});
    const cplx z{0.21, 0.13};
    const cplx v0 = theta_v(z, tau);
    for (int m = -2; m <= 2; ++m)
        for (int n = -1; n <= 1; ++n)
            CHECK(std::abs(theta_v(z + double(m) * tau.value() + double(n), tau) - v0 - double(m)) < 1e-11);
    CHECK(std::abs(theta_v(-z, tau) + theta_v(z, tau)) < 1e-13);
}

TEST_CASE("theta transforms under Gamma(2) up to an eighth root of unity")
{
    const std::array<std::array<long, 4>, 4> gammas{{{1, 2, 0, 1}, {1, 0, 2, 1}, {3, 2, 4, 3}, {1, -2, -2, 5}}};
    const cplx t{0.1, 1.2}, z{0.23, -0.17};
    for (const auto& g : gammas) {
        const cplx j = double(g[2]) * t + double(g[3]);
        const cplx t2 = (double(g[0]) * t + double(g[1])) / j;
        const cplx lhs = oracle::theta_direct(z / j, t2, 80);
        const cplx rhs = std::sqrt(j) * std::exp(kI * kPi * double(g[2]) * z * z / j) * theta(z, ModularParameter(t));
        if (t2.imag() < 0.05)
            continue;
        CHECK(std::abs(std::pow(theta(z / j, ModularParameter(t2)) / rhs, 8) - 1.0) < 1e-9);
        CHECK(std::abs(std::pow(lhs / rhs, 8) - 1.0) < 1e-9);
    }
}

TEST_CASE("half-period values sum to zero and satisfy the cubic")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 10; ++k) {
        const cplx t = oracle::random_tau(rng);
        const ModularParameter tau(t);
        const HalfPeriodValues e = half_period_values(tau);
        CHECK(std::abs(e.e1 + e.e2 + e.e3) < 1e-12 * std::abs(e.e1));
        CHECK(oracle::rel(e.e1, oracle::wp_lambert(0.5, t)) < 1e-12);
        CHECK(oracle::rel(e[3], oracle::wp_lambert(0.5 * (1.0 + t), t)) < 1e-11);
        for (int j = 0; j < 5; ++j) {
            const cplx z = u(rng) + u(rng) * t;
            if (lattice_distance(z, tau) < 0.05)
                continue;
            const cplx p = wp(z, tau), pz = wp_z(z, tau);
            const cplx rhs = 4.0 * (p - e.e1) * (p - e.e2) * (p - e.e3);
            CHECK(std::abs(pz * pz - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("frozen half-period values")
{
    const cplx taus[] = {oracle::lambda_tau0, oracle::lambda_tau1, oracle::lambda_tau2, oracle::lambda_tau3};
    const cplx e1[] = {oracle::e1_value0, oracle::e1_value1, oracle::e1_value2, oracle::e1_value3};
    const cplx e2[] = {oracle::e2_value0, oracle::e2_value1, oracle::e2_value2, oracle::e2_value3};
    for (int k = 0; k < 4; ++k) {
        const HalfPeriodValues e = half_period_values(ModularParameter(taus[k]));
        CHECK(oracle::rel(e.e1, e1[k]) < 1e-13);
        CHECK(oracle::rel(e.e2, e2[k]) < 1e-13);
    }
}

TEST_CASE("heat equation")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 20; ++k) {
        const cplx t = oracle::random_tau(rng);
        const cplx z = u(rng) + u(rng) * t;
        CHECK(std::abs(heat_residual(z, ModularParameter(t))) < 1e-9);
    }
}

TEST_CASE("G2 q-expansion")
{
    for (int n = 1; n <= 30; ++n)
        CHECK(eisenstein_g2_coefficient(n) == oracle::sigma1(n));
    const cplx taus[] = {oracle::lambda_tau0, oracle::lambda_tau1, oracle::lambda_tau2, oracle::lambda_tau3};
    const cplx g2[] = {oracle::g2_value0, oracle::g2_value1, oracle::g2_value2, oracle::g2_value3};
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(eisenstein_g2(ModularParameter(taus[k])) - g2[k]) < 1e-15);
    CHECK(std::abs(eisenstein_g2(ModularParameter({0.0, 50.0})) + 1.0 / 24.0) < 1e-16);
}

TEST_CASE("modular constant is -9 pi^2")
{
    std::mt19937_64 rng(13);
    for (int k = 0; k < 10; ++k) {
        const cplx c = constant_c(ModularParameter(oracle::random_tau(rng)));
        CHECK(std::abs(c + 9.0 * kPi * kPi) < 1e-8 * 9.0 * kPi * kPi);
    }
}

TEST_CASE("lattice reduction")
{
    const ModularParameter tau({0.3, 1.1});
    const cplx z0{0.1, 0.2};
    const LatticeReducedPoint r = lattice_reduce(z0 + 3.0 * tau.value() - 2.0, tau);
    CHECK(std::abs(r.z_reduced - z0) < 1e-14);
    CHECK(r.shift_m == 3);
    CHECK(r.shift_n == -2);
    CHECK(lattice_distance(2.0 * tau.value() + 1.0 + 1e-3, tau) == doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("invalid inputs are rejected")
{
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { ModularParameter({0.0, -1.0}); }));
    CHECK(throws_kind(ErrorKind::NonConvergent, [] { wp(0.1, ModularParameter({0.0, 0.01})); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { HalfPeriodIndex(4); }));
    const ModularParameter tau({0.0, 1.0});
    CHECK(throws_kind(ErrorKind::PoleAtLatticePoint, [&] { wp(1.0 + 1e-12, tau); }));
    CHECK(throws_kind(ErrorKind::PoleAtThetaZero, [&] { theta_logderiv(0.5 * (1.0 + tau.value()), tau); }));
    EvalOptions bad;
    bad.max_terms = 0;
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { bad.validate(); }));
}
