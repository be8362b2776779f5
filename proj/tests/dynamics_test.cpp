#include <doctest.h>

#include "oracles/oracle.hpp"

#include <pvi/dynamics.hpp>
#include <pvi/error.hpp>

using namespace pvi;

namespace {

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no exception");
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("parameter representations")
{
    const PainleveParams p = PainleveParams::from_classical({0.125, -0.125, 0.0, 0.5});
    CHECK(std::abs(p.alphas()[0] - 0.125) < 1e-16);
    CHECK(std::abs(p.alphas()[1] - 0.125) < 1e-16);
    CHECK(std::abs(p.alphas()[3]) < 1e-16);
    CHECK(std::abs(p.avec()[0] - 0.5) < 1e-16);
    CHECK(p.source() == ParamRep::Classical);

    const PainleveParams q = PainleveParams::from_avec({-0.5, 0.0, 1.0, 0.3});
    CHECK(q.avec()[0] == cplx(-0.5));
    CHECK(q.avec_signs()[0] == -1);
    CHECK(std::abs(q.alphas()[2] - 0.5) < 1e-16);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const Quad c{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        const PainleveParams a = PainleveParams::from_classical(c);
        const PainleveParams b = PainleveParams::from_alphas(a.alphas());
        const PainleveParams d = PainleveParams::from_avec(a.avec());
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(b.classical()[i] - c[i]) < 1e-14);
            CHECK(std::abs(d.classical()[i] - c[i]) < 1e-13);
            CHECK(std::abs(a.avec()[i] * a.avec()[i] - 2.0 * a.alphas()[i]) < 1e-14);
        }
    }
    CHECK(param_rep_from_string("avec") == ParamRep::AVec);
    CHECK(kind_of([] { param_rep_from_string("greek"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("torsion terms must be distinct modulo the lattice")
{
    GeneralizedParams g = GeneralizedParams::from(PainleveParams::from_alphas({0.1, 0.2, 0.3, 0.4}));
    CHECK(g.terms.size() == 4);
    g.validate();
    g.terms.push_back({1.5, 0.0, 0.2}); // same class as 1/2
    CHECK(kind_of([&] { g.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("reduced-form coefficients")
{
    const ModularParameter tau({0.1, 1.2});
    const EllipticLattice lat(tau);
    for (cplx z : {cplx{0.21, 0.33}, cplx{-0.4, 0.1}}) {
        const cplx wz = lat.wp_z(z);
        const cplx a = rhs_elliptic(z, lat, PainleveParams::from_alphas({0.5, 0.0, 0.0, 0.0}));
        const cplx b = rhs_elliptic(z, lat, PainleveParams::from_alphas({2.0, 0.0, 0.0, 0.0}));
        CHECK(std::abs(a - (-1.0 / (8.0 * kPi * kPi)) * wz) <= 1e-14 * std::abs(a));
        CHECK(std::abs(b - (-1.0 / (2.0 * kPi * kPi)) * wz) <= 1e-14 * std::abs(b));
    }
}

TEST_CASE("classical integration agrees with an independent RK4")
{
    const PainleveParams p = PainleveParams::from_classical({0.3, -0.2, 0.15, 0.1});
    const cplx t0{0.3, 0.05}, t1{0.45, 0.15}, X0{0.4, 0.1}, V0{0.3, -0.2};
    const Trajectory tr = integrate(ClassicalState{X0, V0, t0}, PathSpec::segment(t0, t1), p);
    const auto ref = oracle::rk4_classical(X0, V0, t0, t1, p.classical());
    const ClassicalState end = tr.classical(tr.size() - 1);
    CHECK(std::abs(end.t - t1) < 1e-14);
    CHECK(oracle::rel(end.X, ref[0]) < 1e-9);
    CHECK(oracle::rel(end.Xdot, ref[1]) < 1e-8);
}

TEST_CASE("classical right-hand side matches the oracle formula")
{
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 30; ++k) {
        const PainleveParams p = PainleveParams::from_classical({u(rng), u(rng), u(rng), u(rng)});
        const ClassicalState s{{u(rng), u(rng)}, {u(rng), u(rng)}, {0.5 + 0.3 * u(rng), 0.3 * u(rng)}};
        CHECK(oracle::rel(rhs_classical(s, p), oracle::pvi_classical(s.X, s.Xdot, s.t, p.classical())) < 1e-12);
    }
}

TEST_CASE("Picard solutions are affine in tau")
{
    const PainleveParams zero;
    const ModularParameter tau({0.05, 1.05});
    for (auto [e, f] : {std::pair{0.25, 0.1}, std::pair{1.0 / 3.0, 0.2}, std::pair{-0.2, 0.35}}) {
        const CanonicalLift lift = canonical_lift(e, f, tau);
        const PathSpec path{{tau.value(), tau.value() + cplx(0.2, 0.1), tau.value() + cplx(0.1, 0.3)}};
        const Trajectory tr = integrate(lift.elliptic, path, zero);
        for (const Sample& s : tr.samples) {
            CHECK(std::abs(s.state[1] - e) < 1e-9);
            CHECK(std::abs(s.state[0] - (e * s.base + f)) < 1e-9);
        }
    }
}

TEST_CASE("U = 0 stays invariant for the all-zero classical parameters")
{
    const PainleveParams p = PainleveParams::from_classical({0.0, 0.0, 0.0, 0.0});
    const cplx t0{0.4, 0.1}, X0{0.7, -0.2};
    const cplx Y0 = std::sqrt(X0 * (X0 - 1.0) * (X0 - t0));
    const Trajectory tr = integrate(AlgebraicState{0.0, X0, Y0, t0}, PathSpec::segment(t0, t0 + 0.15), p);
    for (const Sample& s : tr.samples) {
        CHECK(std::abs(s.state[0]) < 1e-9);
        CHECK(std::abs(s.state[1] - X0) < 1e-9);
    }
}

TEST_CASE("charts agree on one solution")
{
    const PainleveParams p = PainleveParams::from_alphas({0.3, 0.1, -0.2, 0.4});
    const ModularParameter tau({0.1, 1.1});
    const EllipticState s{{0.23, 0.17}, {0.3, -0.2}, tau};
    const Trajectory te = integrate(s, PathSpec::segment(tau.value(), tau.value() + cplx(0.06, 0.08)), p);
    const Trajectory ta = convert_trajectory(te, Chart::Algebraic);
    PathSpec tpath;
    for (const Sample& smp : ta.samples)
        tpath.vertices.push_back(smp.base);
    const Trajectory ia = integrate(ta.algebraic(0), tpath, p);
    const Trajectory ic = integrate(to_classical(ta.algebraic(0)), tpath, p);
    const AlgebraicState ref = ta.algebraic(ta.size() - 1);
    CHECK(oracle::rel(ia.samples.back().state[1], ref.X) < 1e-6);
    CHECK(oracle::rel(ia.samples.back().state[0], ref.U) < 1e-6);
    CHECK(oracle::rel(ic.samples.back().state[0], ref.X) < 1e-6);
    CHECK(rhs_residual(te, p) < 1e-6);
    CHECK(rhs_residual(te, PainleveParams::from_alphas({0.6, 0.1, -0.2, 0.4})) > 1e-3);
}

TEST_CASE("state conversion round trip")
{
    const ModularParameter tau({-0.1, 0.9});
    const EllipticState s{{0.17, 0.22}, {-0.4, 0.3}, tau};
    const BranchChoice b = BranchChoice::principal(tau);
    const AlgebraicState a = to_algebraic(s, b);
    CHECK(std::abs(a.curve_residual()) < 1e-10);
    const EllipticState back = to_elliptic(a, tau, b, s.z);
    CHECK(std::abs(back.z - s.z) < 1e-10);
    CHECK(std::abs(back.y - s.y) < 1e-9);
    const ClassicalState c = to_classical(a);
    const AlgebraicState a2 = to_algebraic(c, a.Y);
    CHECK(std::abs(a2.U - a.U) < 1e-10);
    CHECK(std::abs(a2.Y - a.Y) < 1e-12);
    ChartContext ctx;
    ctx.tau = ModularParameter({0.3, 0.9});
    CHECK(kind_of([&] { convert_state(s, Chart::Algebraic, ctx); }) == ErrorKind::InconsistentContext);
}

TEST_CASE("paths and poles")
{
    const PainleveParams p = PainleveParams::from_alphas({0.1, 0.0, 0.0, 0.2});
    const ClassicalState s{0.3, 0.1, 0.5};
    CHECK(kind_of([&] { integrate(s, PathSpec{{0.5, 0.8, 1.2}}, p); }) == ErrorKind::InvalidPath);
    CHECK(kind_of([&] { integrate(s, PathSpec{{0.5}}, p); }) == ErrorKind::InvalidPath);
    CHECK(kind_of([&] { integrate(s, PathSpec{{0.6, 0.7}}, p); }) == ErrorKind::InvalidPath);

    // X' large pushes X onto t before the path ends.
    const ClassicalState fast{0.31, 40.0, 0.3};
    try {
        integrate(fast, PathSpec::segment(0.3, 0.6), PainleveParams::from_alphas({0.5, 0.1, 0.1, 0.2}));
        FAIL("expected a pole approach");
    } catch (const PoleApproachError& e) {
        CHECK(e.partial().size() >= 1);
        CHECK(std::abs(e.partial().samples.front().base - 0.3) < 1e-15);
    }

    IntegratorConfig cfg;
    cfg.rtol = -1.0;
    CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("chart names")
{
    CHECK(chart_from_string("algebraic") == Chart::Algebraic);
    CHECK(to_string(Chart::Elliptic) == "elliptic");
    CHECK(chart_dimension(Chart::Algebraic) == 3);
    CHECK(kind_of([] { chart_from_string("polar"); }) == ErrorKind::InvalidArgument);
}
