#include <doctest.h>

#include "oracles/frozen.hpp"
#include "oracles/oracle.hpp"

#include <pvi/error.hpp>
#include <pvi/uniformization.hpp>

using namespace pvi;

TEST_CASE("lambda at frozen points")
{
    CHECK(std::abs(modular_lambda(ModularParameter(kI)) - 0.5) < 1e-10);
    const cplx taus[] = {oracle::lambda_tau0, oracle::lambda_tau1, oracle::lambda_tau2, oracle::lambda_tau3};
    const cplx lam[] = {oracle::lambda_value0, oracle::lambda_value1, oracle::lambda_value2, oracle::lambda_value3};
    for (int k = 0; k < 4; ++k)
        CHECK(oracle::rel(modular_lambda(ModularParameter(taus[k])), lam[k]) < 1e-13);
}

TEST_CASE("lambda is invariant under Gamma(2) and sends tau + 1 to 1/t")
{
    const ModularParameter tau({0.13, 0.95});
    const cplx t = modular_lambda(tau);
    const cplx tv = tau.value();
    CHECK(oracle::rel(modular_lambda(ModularParameter(tv + 2.0)), t) < 1e-12);
    CHECK(oracle::rel(modular_lambda(ModularParameter(tv / (2.0 * tv + 1.0))), t) < 1e-10);
    CHECK(oracle::rel(modular_lambda(ModularParameter(tv + 1.0)), 1.0 / t) < 1e-12);
}

TEST_CASE("lambda derivative matches a difference quotient")
{
    std::mt19937_64 rng(17);
    for (int k = 0; k < 10; ++k) {
        const cplx tv = oracle::random_tau(rng);
        const double h = 1e-4;
        const cplx fd = (modular_lambda(ModularParameter(tv + h)) - modular_lambda(ModularParameter(tv - h))) / (2.0 * h);
        CHECK(oracle::rel(modular_lambda_derivative(ModularParameter(tv)), fd) < 1e-7);
    }
}

TEST_CASE("invert_lambda round trip")
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int k = 0; k < 30; ++k) {
        const cplx t{u(rng) + 0.3, u(rng)};
        if (std::abs(t) < 0.05 || std::abs(t - 1.0) < 0.05)
            continue;
        const ModularParameter tau = invert_lambda(t, lambda_seed(t));
        CHECK(std::abs(modular_lambda(tau) - t) < 1e-8 * std::max(1.0, std::abs(t)));
    }
}

TEST_CASE("phi lands on the Legendre curve and sends half-periods to 0, 1, t")
{
    const ModularParameter tau({-0.2, 1.1});
    const BranchChoice b = BranchChoice::principal(tau);
    const cplx t = modular_lambda(tau);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 20; ++k) {
        const cplx z = u(rng) + u(rng) * tau.value();
        if (lattice_distance(z, tau) < 0.05)
            continue;
        const CurvePoint p = phi(z, tau, b);
        CHECK(std::abs(p.curve_residual()) < 1e-9 * std::max(1.0, std::norm(p.Y)));
        CHECK(std::abs(p.t - t) < 1e-13);
    }
    CHECK(std::abs(phi(0.5, tau, b).X) < 1e-12);
    CHECK(std::abs(phi(0.5 * tau.value(), tau, b).X - 1.0) < 1e-12);
    CHECK(std::abs(phi(0.5 + 0.5 * tau.value(), tau, b).X - t) < 1e-12);
    CHECK_THROWS_AS(phi(1.0, tau, b), Error);
}

TEST_CASE("z_from_point inverts phi including the sign of Y")
{
    const ModularParameter tau({0.25, 0.8});
    const BranchChoice b = BranchChoice::principal(tau);
    for (cplx z : {cplx{0.11, 0.07}, cplx{-0.3, 0.2}, cplx{0.4, -0.25}}) {
        const CurvePoint p = phi(z, tau, b);
        const cplx back = z_from_point(p, tau, b, z + 0.01);
        CHECK(std::abs(back - z) < 1e-9);
        const cplx unseeded = z_from_point(p, tau, b);
        CHECK(lattice_distance(unseeded - z, tau) < 1e-9);
    }
}

TEST_CASE("dX/Y pulls back to 2b dz")
{
    const ModularParameter tau({0.0, 1.3});
    const BranchChoice b = BranchChoice::principal(tau);
    for (cplx z : {cplx{0.2, 0.1}, cplx{-0.35, 0.4}})
        CHECK(std::abs(pullback_residual(z, tau, b)) < 1e-9);
}

TEST_CASE("period 2b is 2 pi i times the reflected hypergeometric period up to sign")
{
    const cplx ts[] = {oracle::f21_t0, oracle::f21_t1};
    const cplx fs[] = {oracle::f21_reflected0, oracle::f21_reflected1};
    for (int k = 0; k < 2; ++k) {
        const ModularParameter tau = invert_lambda(ts[k], lambda_seed(ts[k]));
        const PeriodPair p = curve_periods(tau, BranchChoice::principal(tau));
        const cplx ratio = p.pi1 / (kTwoPiI * fs[k]);
        CHECK(std::abs(ratio * ratio - 1.0) < 1e-10);
        CHECK(oracle::rel(oracle::f21_half(1.0 - ts[k]), fs[k]) < 1e-13);
        CHECK(std::abs(p.pi2 - tau.value() * p.pi1) < 1e-13 * std::abs(p.pi2));
    }
}

TEST_CASE("branch choices")
{
    const ModularParameter tau({0.0, 1.0});
    const BranchChoice b = BranchChoice::principal(tau);
    const HalfPeriodValues e = half_period_values(tau);
    CHECK(std::abs(b.value() * b.value() - (e.e2 - e.e1)) < 1e-12);
    CHECK(b.flipped().value() == -b.value());
    CHECK_THROWS_AS(BranchChoice(b.value() * 1.1, tau), Error);
    const BranchChoice c = b.continued_to(ModularParameter({0.01, 1.0}));
    CHECK(std::abs(c.value() - b.value()) < 0.1 * std::abs(b.value()));
}
