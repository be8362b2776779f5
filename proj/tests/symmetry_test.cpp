#include <doctest.h>

#include "oracles/oracle.hpp"

#include <pvi/error.hpp>
#include <pvi/numeric.hpp>
#include <pvi/symmetry.hpp>

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

double state_distance(const EllipticState& a, const EllipticState& b)
{
    return std::max({std::abs(a.z - b.z), std::abs(a.y - b.y), std::abs(a.tau.value() - b.tau.value())});
}

Trajectory sample_solution(const PainleveParams& p)
{
    const ModularParameter tau({0.1, 1.1});
    const EllipticState s{{0.23, 0.17}, {0.3, -0.2}, tau};
    return integrate(s, PathSpec::segment(tau.value(), tau.value() + cplx(0.05, 0.08)), p);
}

Quad q(double a, double b, double c, double d) { return {a, b, c, d}; }

} // namespace

TEST_CASE("Gamma(2) x Z^2 elements")
{
    CHECK(kind_of([] { ModularElement(1, 1, 0, 1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { ModularElement(1, 2, 2, 1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { ModularElement(3, 2, 1, 1); }) == ErrorKind::InvalidArgument);

    const ModularElement g1(1, 2, 0, 1, 1, -1), g2(1, 0, 2, 1, 0, 2), g3(-1, 2, 0, -1, 2, 0);
    const EllipticState s{{0.13, 0.08}, {0.4, -0.3}, ModularParameter({0.1, 1.2})};
    CHECK(state_distance(gamma2_act(g1 * g2, s), gamma2_act(g1, gamma2_act(g2, s))) < 1e-13);
    CHECK((g1 * g2) * g3 == g1 * (g2 * g3));
    CHECK(g1 * g1.inverse() == ModularElement::identity());
    CHECK(g2.inverse() * g2 == ModularElement::identity());
    CHECK(state_distance(gamma2_act(g3.inverse(), gamma2_act(g3, s)), s) < 1e-13);
    CHECK(state_distance(gamma2_act(ModularElement::identity(), s), s) == 0.0);

    const EllipticState shifted = gamma2_act(ModularElement::shift(2, -1), s);
    CHECK(std::abs(shifted.z - (s.z + 2.0 * s.tau.value() - 1.0)) < 1e-15);
    CHECK(std::abs(shifted.y - (s.y + 2.0)) < 1e-15);
}

TEST_CASE("Gamma(2) and zero-section shifts carry solutions to solutions")
{
    const PainleveParams p = PainleveParams::from_alphas({0.3, 0.1, -0.2, 0.4});
    const Trajectory tr = sample_solution(p);
    for (const ModularElement& g : {ModularElement(1, 0, 2, 1, 1, -1), ModularElement(1, 2, 0, 1, 0, 1)})
        CHECK(rhs_residual(gamma2_act(g, tr), p) < 1e-6);
    for (int i = 0; i < 4; ++i) {
        const Trajectory sh = shift_zero_section(HalfPeriodIndex(i), tr);
        CHECK(rhs_residual(sh, sh.params) < 1e-6);
        for (int k = 0; k < 4; ++k)
            CHECK(sh.params.alphas()[k] == p.alphas()[k ^ i]);
        if (i != 0)
            CHECK(rhs_residual(sh, p) > 1e-4);
    }
}

TEST_CASE("shifting twice by the same half-period is a lattice translation")
{
    const PainleveParams p = PainleveParams::from_alphas({0.3, 0.1, -0.2, 0.4});
    const EllipticState s{{0.13, 0.08}, {0.4, -0.3}, ModularParameter({0.1, 1.2})};
    for (int i = 0; i < 4; ++i) {
        const HalfPeriodIndex j(i);
        const ShiftedSection once = shift_zero_section(j, s, p);
        const ShiftedSection twice = shift_zero_section(j, once.state, once.params);
        const EllipticState expect = gamma2_act(ModularElement::shift(j.tau_bit(), j.one_bit()), s);
        CHECK(state_distance(twice.state, expect) < 1e-14);
        CHECK(twice.params.alphas() == p.alphas());
    }
}

TEST_CASE("Landin transform")
{
    const PainleveParams src = PainleveParams::from_alphas({0.1, 0.2, 0.1, 0.2});
    const PainleveParams dst = landin(src);
    CHECK(std::abs(dst.alphas()[0] - 0.4) < 1e-15);
    CHECK(std::abs(dst.alphas()[1] - 0.8) < 1e-15);
    CHECK(std::abs(dst.alphas()[2]) == 0.0);
    const PainleveParams back = landin(dst, LandinDirection::Inverse);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(back.alphas()[i] - src.alphas()[i]) < 1e-15);
    CHECK(kind_of([] { landin(PainleveParams::from_alphas({0.1, 0.2, 0.3, 0.2})); }) == ErrorKind::PatternMismatch);
    CHECK(kind_of([&] { landin(src, LandinDirection::Inverse); }) == ErrorKind::PatternMismatch);

    const Trajectory tr = sample_solution(src);
    const LandinResult r = landin_map(tr, LandinDirection::Forward);
    CHECK(r.residual < 1e-6);
    CHECK(r.rejected_residual > 1e-3);
    CHECK(rhs_residual(r.trajectory, dst) < 1e-6);
    const LandinResult inv = landin_map(integrate(tr.elliptic(0), PathSpec::segment(tr.samples[0].base,
                                                                                      tr.samples[0].base + 0.05), dst),
                                        LandinDirection::Inverse);
    CHECK(inv.residual < 1e-6);
    CHECK(inv.scale == 2.0);
}

TEST_CASE("Landin identity for wp_z")
{
    for (cplx t : {cplx{0.0, 1.0}, cplx{0.3, 0.7}, cplx{-0.2, 1.6}})
        for (int a = -4; a <= 4; ++a)
            for (int b = -4; b <= 4; ++b) {
                const cplx z = 0.11 * a + 0.09 * b * t + cplx(0.013, 0.007);
                CHECK(std::abs(landin_identity_residual(z, ModularParameter(t))) <
                      1e-9 * std::max(1.0, std::abs(wp_z(z, ModularParameter(t)))));
            }
    CHECK(kind_of([] { landin_identity_residual(cplx(0.0, 0.5), ModularParameter(kI)); }) == ErrorKind::PoleHit);
}

TEST_CASE("W group laws")
{
    std::mt19937_64 rng(67);
    auto random_w = [&] {
        WElement w;
        std::array<int, 4> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        w.perm = perm;
        std::uniform_int_distribution<int> coin(0, 1), sh(-2, 2);
        long sum = 0;
        for (int i = 0; i < 4; ++i) {
            w.eps[i] = coin(rng) ? 1 : -1;
            w.shift[i] = sh(rng);
            sum += w.shift[i];
        }
        if (sum % 2 != 0)
            w.shift[0] += 1;
        return w;
    };
    const Quad a = q(0.13, -0.41, 0.27, 0.9);
    for (int k = 0; k < 100; ++k) {
        const WElement w1 = random_w(), w2 = random_w();
        w1.validate();
        const Quad lhs = w_act(w1 * w2, a), rhs = w_act(w1, w_act(w2, a));
        const Quad id = w_act(w1.inverse(), w_act(w1, a));
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(lhs[i] - rhs[i]) < 1e-14);
            CHECK(std::abs(id[i] - a[i]) < 1e-14);
        }
    }
    WElement odd;
    odd.shift = {1, 0, 0, 0};
    CHECK(kind_of([&] { odd.validate(); }) == ErrorKind::InvalidArgument);
    WElement notperm;
    notperm.perm = {0, 0, 2, 3};
    CHECK(kind_of([&] { notperm.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("classification of special parameter points")
{
    const std::vector<std::pair<Quad, SolvabilityTag>> cases{
        {q(0, 0, 0, 0), SolvabilityTag::ClassicalGeneral},
        {q(1, 1, 0, 0), SolvabilityTag::ClassicalGeneral},
        {q(0.5, 0.5, 0.5, 0.5), SolvabilityTag::ClassicalGeneral},
        {q(0, 0, 0, 1), SolvabilityTag::OneDimFamily},
        {q(0, 0, 0.5, 0.5), SolvabilityTag::OneDimFamily},
        {q(0.25, 0.25, 0.25, 0.25), SolvabilityTag::OneDimFamily},
        {q(0.3, 0.2, 0.4, 0.1), SolvabilityTag::HypergeometricHyperplane},
        {q(0.7, -0.1, 0.25, 0.15), SolvabilityTag::HypergeometricHyperplane},
        {q(0.13, 0.27, 0.31, 0.05), SolvabilityTag::Unknown},
    };
    for (const auto& [a, tag] : cases) {
        const SolvabilityClass c = classify(a);
        CHECK(c.tag == tag);
        if (tag != SolvabilityTag::Unknown)
            CHECK(c.replay(a));
        else
            CHECK(c.witness.empty());
    }
    CHECK(classify(q(0.1, 0.2, 0.3, 0.4) /* sum 1 */).tag == SolvabilityTag::HypergeometricHyperplane);
    CHECK(classify(Quad{cplx(0.1, 0.2), 0.0, 0.0, 0.0}).tag == SolvabilityTag::Unknown);
    CHECK(to_string(SolvabilityTag::OneDimFamily) == "one_dim_family");
}

TEST_CASE("classification is constant on W-orbits")
{
    std::mt19937_64 rng(71);
    const Quad bases[] = {q(0, 0, 0, 1), q(0.25, 0.25, 0.25, 0.25), q(0.3, 0.2, 0.4, 0.1), q(0.5, 0.5, 0.5, 0.5)};
    std::uniform_int_distribution<int> coin(0, 1), sh(-1, 1);
    for (const Quad& a : bases) {
        const SolvabilityTag tag = classify(a).tag;
        for (int k = 0; k < 20; ++k) {
            WElement w;
            std::array<int, 4> perm{0, 1, 2, 3};
            std::shuffle(perm.begin(), perm.end(), rng);
            w.perm = perm;
            long sum = 0;
            for (int i = 0; i < 4; ++i) {
                w.eps[i] = coin(rng) ? 1 : -1;
                w.shift[i] = sh(rng);
                sum += w.shift[i];
            }
            if (sum % 2 != 0)
                w.shift[3] -= 1;
            const Quad b = w_act(w, a);
            const SolvabilityClass c = classify(b);
            CHECK(c.tag == tag);
            CHECK(c.replay(b));
        }
    }
}

TEST_CASE("Landin moves on a-vectors")
{
    const Quad a = landin_avec(q(0.1, 0.3, 0.1, 0.3), LandinDirection::Forward);
    CHECK(std::abs(a[0] - 0.2) < 1e-15);
    CHECK(std::abs(a[1] - 0.6) < 1e-15);
    const Quad b = landin_avec(a, LandinDirection::Inverse);
    CHECK(std::abs(b[2] - 0.1) < 1e-15);
    CHECK(kind_of([] { landin_avec(q(0.1, 0.3, 0.2, 0.3), LandinDirection::Forward); }) ==
          ErrorKind::PatternMismatch);
}

TEST_CASE("Okamoto derivation")
{
    const Quad a{0.3, 0.2, -0.4, 0.7};
    const PainleveParams p = PainleveParams::from_avec(a);
    AlgebraicState s{{0.2, 0.1}, {0.3, 0.4}, 0.0, {0.45, 0.2}};
    s.Y = std::sqrt(s.X * (s.X - 1.0) * (s.X - s.t));
    const Trajectory tr = integrate(s, PathSpec::segment(s.t, s.t + cplx(0.05, 0.03)), p);
    const std::vector<cplx> t = tr.bases(), X = tr.component(1), U = tr.component(0);
    std::vector<cplx> h;
    for (std::size_t i = 0; i < tr.size(); ++i)
        h.push_back(okamoto_h(tr.algebraic(i), a));
    const Observable fx = [](const AlgebraicState& v) { return v.X; };
    const Observable fu = [](const AlgebraicState& v) { return v.U; };
    const Observable fh = [&](const AlgebraicState& v) { return okamoto_h(v, a); };
    for (std::size_t i = 4; i + 4 < tr.size(); i += 3) {
        const AlgebraicState si = tr.algebraic(i);
        CHECK(std::abs(okamoto_D(fx, si, a) - sampled_derivative(t, X, t[i], 1)) < 1e-7);
        CHECK(std::abs(okamoto_D(fu, si, a) - sampled_derivative(t, U, t[i], 1)) < 1e-7);
        CHECK(std::abs(okamoto_D(fh, si, a) - sampled_derivative(t, h, t[i], 1)) < 1e-6);
    }
    const AlgebraicRhs r = rhs_algebraic(s, p);
    CHECK(std::abs(okamoto_D(fx, s, a) - r.dX) < 1e-12);
    CHECK(std::abs(okamoto_D(fu, s, a) - r.dU) < 1e-12);
}

TEST_CASE("Okamoto p and the shift of h")
{
    const Quad a{0.3, 0.2, -0.4, 0.7};
    AlgebraicState s{{0.2, 0.1}, {0.3, 0.4}, 0.0, {0.45, 0.2}};
    s.Y = std::sqrt(s.X * (s.X - 1.0) * (s.X - s.t));
    const cplx p = okamoto_p(s, a);
    const cplx expect = s.U / s.Y + 0.5 * (a[1] / s.X + a[2] / (s.X - 1.0) + (a[3] - 1.0) / (s.X - s.t));
    CHECK(std::abs(p - expect) < 1e-14);
    const OkamotoShift sh = okamoto_shift_h(okamoto_h(s, a), s, a);
    CHECK(std::abs(sh.a[0] - (a[0] + 1.0)) < 1e-15);
    CHECK(std::abs(sh.a[3] - (a[3] + 1.0)) < 1e-15);
    CHECK(std::abs(sh.a[1] - a[1]) == 0.0);
    AlgebraicState pole = s;
    pole.X = 0.0;
    pole.Y = 0.0;
    CHECK(kind_of([&] { okamoto_p(pole, a); }) == ErrorKind::PoleHit);
}
