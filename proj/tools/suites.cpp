#include "suites.hpp"

#include <pvi/forms.hpp>
#include <pvi/numeric.hpp>
#include <pvi/picard_fuchs.hpp>
#include <pvi/symmetry.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace pvi::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Context {
    bool quick;
    std::mt19937_64 rng;

    int n(int full, int fast) const { return quick ? fast : full; }
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    ModularParameter tau(double lo = 0.5, double hi = 2.0) { return ModularParameter({uniform(-0.5, 0.5), uniform(lo, hi)}); }
};

using Check = std::function<double(Context&)>;

void run(std::vector<CheckRecord>& out, Context& ctx, std::string name, std::string anchor, double threshold,
         const Check& check, bool at_least = false)
{
    CheckRecord r{std::move(name), std::move(anchor), kInf, threshold, at_least, false, {}};
    try {
        r.residual = check(ctx);
        r.pass = std::isfinite(r.residual) && (at_least ? r.residual >= threshold : r.residual <= threshold);
    } catch (const Error& e) {
        r.error = e.what();
    }
    out.push_back(std::move(r));
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// ---------------------------------------------------------------- elliptic

void elliptic_suite(std::vector<CheckRecord>& out, Context& ctx)
{
    run(out, ctx, "elliptic.modular_constant", "modular constant C(tau) equals -9 pi^2", 1e-8, [](Context& c) {
        double worst = 0.0;
        for (int i = 0; i < c.n(20, 5); ++i) {
            const cplx C = constant_c(c.tau());
            worst = std::max(worst, std::abs(C + 9.0 * kPi * kPi) / (9.0 * kPi * kPi));
        }
        return worst;
    });
    run(out, ctx, "elliptic.weierstrass_cubic", "wp_z^2 = 4 (wp - e1)(wp - e2)(wp - e3)", 1e-9, [](Context& c) {
        double worst = 0.0;
        const int g = c.n(10, 4);
        for (int k = 0; k < c.n(5, 2); ++k) {
            const EllipticLattice lat(c.tau());
            const auto& e = lat.half_period_values();
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) {
                    const cplx z = (i + 0.5) / g + (j + 0.5) / g * lat.tau().value();
                    const auto w = lat.wp_pair(z);
                    const cplx rhs = 4.0 * (w.wp - e.e1) * (w.wp - e.e2) * (w.wp - e.e3);
                    worst = std::max(worst, std::abs(w.wp_z * w.wp_z - rhs) / std::max(1.0, std::abs(rhs)));
                }
        }
        return worst;
    });
    run(out, ctx, "elliptic.half_period_sum", "e1 + e2 + e3 = 0", 1e-12, [](Context& c) {
        double worst = 0.0;
        for (int i = 0; i < c.n(20, 5); ++i) {
            const HalfPeriodValues e = half_period_values(c.tau());
            worst = std::max(worst, std::abs(e.e1 + e.e2 + e.e3));
        }
        return worst;
    });
    run(out, ctx, "elliptic.heat_equation", "theta solves the heat equation theta_tau = theta_zz / (4 pi i)", 1e-9,
        [](Context& c) {
            double worst = 0.0;
            for (int k = 0; k < c.n(5, 2); ++k) {
                const ModularParameter tau = c.tau();
                for (int i = 0; i < c.n(8, 3); ++i) {
                    const cplx z{c.uniform(-1.0, 1.0), c.uniform(-1.0, 1.0)};
                    const ThetaJet j = theta_jet(z, tau);
                    worst = std::max(worst, std::abs(heat_residual(z, tau)) / std::max(1.0, std::abs(j.dzz)));
                }
            }
            return worst;
        });
    run(out, ctx, "elliptic.g2_q_coefficients", "q-expansion coefficients of G2 are the divisor sums sigma_1(n)",
        0.0, [](Context&) {
            // Coefficients recovered from values of G2 along a horizontal line,
            // compared with a brute-force divisor sum.
            constexpr int N = 64;
            const double y = 0.12;
            std::vector<cplx> vals(N);
            for (int k = 0; k < N; ++k)
                vals[k] = eisenstein_g2(ModularParameter({static_cast<double>(k) / N, y}));
            double worst = 0.0;
            for (int n = 1; n <= 10; ++n) {
                cplx c = 0.0;
                for (int k = 0; k < N; ++k)
                    c += vals[k] * std::exp(-kTwoPiI * (static_cast<double>(n * k) / N));
                c /= static_cast<double>(N) * std::exp(-2.0 * kPi * n * y);
                long sigma = 0;
                for (int d = 1; d <= n; ++d)
                    if (n % d == 0)
                        sigma += d;
                worst = std::max(worst, std::abs(std::round(c.real()) - static_cast<double>(sigma)) +
                                            (std::abs(c.real() - std::round(c.real())) > 1e-6 ? 1.0 : 0.0));
            }
            return worst;
        });
    run(out, ctx, "elliptic.theta_quasi_periodicity", "theta(z + m tau + n) = exp(-pi i m^2 tau - 2 pi i m z) theta(z)",
        1e-9, [](Context& c) {
            double worst = 0.0;
            for (int i = 0; i < c.n(20, 5); ++i) {
                const ModularParameter tau = c.tau();
                const cplx z{c.uniform(-0.5, 0.5), c.uniform(-0.3, 0.3)};
                const int m = static_cast<int>(c.uniform(-3.0, 3.0)), n = static_cast<int>(c.uniform(-3.0, 3.0));
                const cplx lhs = theta(z + static_cast<double>(m) * tau.value() + static_cast<double>(n), tau);
                const cplx rhs = std::exp(-kI * kPi * static_cast<double>(m * m) * tau.value() -
                                          kTwoPiI * static_cast<double>(m) * z) *
                                 theta(z, tau);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
            }
            return worst;
        });
    run(out, ctx, "elliptic.theta_modular",
        "theta(z/(c tau + d), gamma tau) = zeta (c tau + d)^(1/2) exp(pi i c z^2/(c tau + d)) theta(z, tau), zeta^8 = 1",
        1e-9, [](Context& c) {
            const ModularElement gs[] = {{1, 0, 2, 1}, {1, 2, 0, 1}, {1, -2, 2, -3}, {3, 2, 4, 3}, {1, 0, -2, 1}};
            double worst = 0.0;
            for (const auto& g : gs) {
                const ModularParameter tau({c.uniform(-0.1, 0.1), c.uniform(0.9, 1.3)});
                const cplx z{c.uniform(-0.3, 0.3), c.uniform(-0.2, 0.2)};
                const cplx j = static_cast<double>(g.c()) * tau.value() + static_cast<double>(g.d());
                const cplx tau2 = (static_cast<double>(g.a()) * tau.value() + static_cast<double>(g.b())) / j;
                if (tau2.imag() < 0.3)
                    continue;
                const cplx ratio = theta(z / j, ModularParameter(tau2)) /
                                   (std::sqrt(j) * std::exp(kI * kPi * static_cast<double>(g.c()) * z * z / j) *
                                    theta(z, tau));
                worst = std::max(worst, std::abs(std::pow(ratio, 8) - 1.0));
            }
            return worst;
        });
    run(out, ctx, "elliptic.v_functional_equations",
        "v transforms like y: v(z/(c tau + d), gamma tau) = v (c tau + d) - c z and v(z + m tau + n) = v + m", 1e-9,
        [](Context& c) {
            const ModularElement gs[] = {{1, 0, 2, 1}, {1, 2, 0, 1, 1, 0}, {1, 0, -2, 1, -1, 2}};
            double worst = 0.0;
            for (const auto& g : gs) {
                const ModularParameter tau({c.uniform(-0.1, 0.1), c.uniform(0.9, 1.3)});
                const cplx z{c.uniform(-0.3, 0.3), c.uniform(-0.2, 0.2)};
                // v(z, tau) plays the role of y; the lift maps it to v of the image.
                const EllipticState img = gamma2_act(g, EllipticState{z, theta_v(z, tau), tau});
                worst = std::max(worst, rel(theta_v(img.z, img.tau), img.y));
            }
            return worst;
        });
}

// ---------------------------------------------------------------- uniformization

void uniformization_suite(std::vector<CheckRecord>& out, Context& ctx)
{
    run(out, ctx, "uniformization.lambda_at_i", "lambda(i) = 1/2", 1e-10,
        [](Context&) { return std::abs(modular_lambda(ModularParameter(kI)) - 0.5); });
    run(out, ctx, "uniformization.invert_lambda_round_trip", "lambda inversion recovers tau", 1e-8, [](Context& c) {
        double worst = 0.0;
        for (int i = 0; i < c.n(10, 3); ++i) {
            const ModularParameter tau = c.tau(0.7, 1.8);
            const ModularParameter seed(tau.value() + cplx(0.02, -0.015));
            const ModularParameter back = invert_lambda(modular_lambda(tau), seed);
            worst = std::max(worst, std::abs(back.value() - tau.value()));
        }
        return worst;
    });
    run(out, ctx, "uniformization.curve_image", "phi(z) lies on Y^2 = X(X-1)(X-t)", 1e-9, [](Context& c) {
        double worst = 0.0;
        for (int i = 0; i < c.n(20, 5); ++i) {
            const ModularParameter tau = c.tau();
            const BranchChoice b = BranchChoice::principal(tau);
            const CurvePoint p = phi(cplx{c.uniform(0.05, 0.45), c.uniform(0.05, 0.45)} * tau.value() +
                                         c.uniform(0.05, 0.45),
                                     tau, b);
            worst = std::max(worst, std::abs(p.curve_residual()) / std::max(1.0, std::norm(p.X) * std::abs(p.X)));
        }
        return worst;
    });
    run(out, ctx, "uniformization.preimage_round_trip", "z_from_point inverts phi modulo the lattice", 1e-9,
        [](Context& c) {
            double worst = 0.0;
            for (int i = 0; i < c.n(10, 3); ++i) {
                const ModularParameter tau = c.tau();
                const BranchChoice b = BranchChoice::principal(tau);
                const cplx z = c.uniform(0.1, 0.4) + c.uniform(0.1, 0.4) * tau.value();
                const cplx back = z_from_point(phi(z, tau, b), tau, b, z + 0.01);
                worst = std::max(worst, std::abs(back - z));
            }
            return worst;
        });
    run(out, ctx, "uniformization.lambda_derivative", "dt/dtau = -(i/pi)(e2 - e1) t (t - 1)", 1e-8, [](Context& c) {
        double worst = 0.0;
        for (int i = 0; i < c.n(10, 3); ++i) {
            const ModularParameter tau = c.tau();
            const Derivatives2 d = central_derivatives(
                [](cplx s) { return modular_lambda(ModularParameter(s)); }, tau.value(), 1e-3);
            worst = std::max(worst, rel(d.d1, modular_lambda_derivative(tau)));
        }
        return worst;
    });
}

// ---------------------------------------------------------------- picard-fuchs

PainleveParams p2_point() { return PainleveParams::from_classical({0.125, -0.125, 0.0, 0.5}); }

std::vector<PainleveParams> sample_params()
{
    return {p2_point(), PainleveParams::from_alphas({0.3, 0.2, -0.1, 0.05}),
            PainleveParams::from_classical({0.125, -0.125, 0.125, 0.375}), PainleveParams::from_alphas({1, 0.5, 0.25, 2}),
            PainleveParams::from_alphas({cplx(0.2, 0.1), -0.3, 0.15, cplx(0.4, -0.2)})};
}

void picard_fuchs_suite(std::vector<CheckRecord>& out, Context& ctx)
{
    run(out, ctx, "picard_fuchs.periods_annihilated", "L_t annihilates both periods of dX/Y", 1e-6, [](Context& c) {
        double worst = 0.0;
        for (int i = 0; i < c.n(10, 3); ++i) {
            const cplx t0{c.uniform(0.2, 0.8), c.uniform(-0.3, 0.3)};
            const PeriodContinuation pc(t0, lambda_seed(t0));
            worst = std::max(worst, std::abs(apply_lt([&](cplx t) { return pc.at(t).pi1; }, t0)));
            worst = std::max(worst, std::abs(apply_lt([&](cplx t) { return pc.at(t).pi2; }, t0)));
        }
        return worst;
    });
    run(out, ctx, "picard_fuchs.mu_equation",
        "t(1-t) L_t of the Abelian integral equals the parameter-weighted combination of Y terms", 1e-5,
        [](Context& c) {
            double worst = 0.0;
            const auto ps = sample_params();
            for (int k = 0; k < c.n(3, 1); ++k) {
                const ModularParameter tau({0.1, 1.1});
                const EllipticState s{{0.23, 0.17}, {0.3, -0.2}, tau};
                const PathSpec path{{tau.value(), tau.value() + cplx(0.05, 0.08)}};
                const Trajectory tr = integrate(s, path, ps[k]);
                worst = std::max(worst, max_mu_residual(tr, ps[k]));
            }
            return worst;
        });
}

// ---------------------------------------------------------------- dynamics

void dynamics_suite(std::vector<CheckRecord>& out, Context& ctx)
{
    run(out, ctx, "dynamics.chart_equivalence",
        "elliptic, algebraic and classical integrations of one solution agree after conversion", 1e-6, [](Context& c) {
            double worst = 0.0;
            const auto ps = sample_params();
            const EllipticState inits[] = {{{0.23, 0.17}, {0.3, -0.2}, ModularParameter({0.1, 1.1})},
                                           {{-0.18, 0.3}, {-0.1, 0.25}, ModularParameter({-0.05, 0.95})},
                                           {{0.31, -0.12}, {0.15, 0.05}, ModularParameter({0.2, 1.3})}};
            for (int k = 0; k < c.n(5, 2); ++k)
                for (int i = 0; i < c.n(3, 1); ++i) {
                    const EllipticState& s = inits[i];
                    const cplx t0 = s.tau.value();
                    const PathSpec path{{t0, t0 + 0.1 * std::polar(1.0, 0.6 + 0.4 * i)}};
                    const Trajectory te = integrate(s, path, ps[k]);
                    const Trajectory ta = convert_trajectory(te, Chart::Algebraic);
                    PathSpec tpath;
                    for (const Sample& smp : ta.samples)
                        tpath.vertices.push_back(smp.base);
                    const Trajectory ia = integrate(ta.algebraic(0), tpath, ps[k]);
                    const Trajectory ic = integrate(to_classical(ta.algebraic(0)), tpath, ps[k]);
                    const AlgebraicState ref = ta.algebraic(ta.size() - 1);
                    worst = std::max(worst, rel(ia.samples.back().state[1], ref.X));
                    worst = std::max(worst, rel(ia.samples.back().state[0], ref.U));
                    worst = std::max(worst, rel(ic.samples.back().state[0], ref.X));
                }
            return worst;
        });
    run(out, ctx, "dynamics.picard_solutions", "with all alpha_i = 0, z = e tau + f and y = e are exact solutions",
        1e-9, [](Context& c) {
            double worst = 0.0;
            for (int i = 0; i < c.n(4, 2); ++i) {
                const double e = c.uniform(-0.4, 0.4), f = c.uniform(-0.4, 0.4);
                const ModularParameter tau = c.tau(0.8, 1.4);
                const Trajectory tr = integrate(EllipticState{e * tau.value() + f, e, tau},
                                                PathSpec::segment(tau.value(), tau.value() + cplx(0.1, 0.1)),
                                                PainleveParams());
                for (const Sample& s : tr.samples) {
                    worst = std::max(worst, std::abs(s.state[1] - e));
                    worst = std::max(worst, std::abs(s.state[0] - (e * s.base + f)));
                }
            }
            return worst;
        });
    run(out, ctx, "dynamics.u_zero_family", "for classical (0,0,0,0) the lines U = 0, X = const are solutions", 1e-9,
        [](Context& c) {
            double worst = 0.0;
            const PainleveParams p = PainleveParams::from_classical({0, 0, 0, 0});
            for (int i = 0; i < c.n(4, 2); ++i) {
                const cplx X0{c.uniform(-1.0, 2.0), c.uniform(0.3, 1.0)};
                const cplx t0{c.uniform(0.2, 0.8), c.uniform(-0.4, -0.2)};
                const AlgebraicState s{0.0, X0, std::sqrt(X0 * (X0 - 1.0) * (X0 - t0)), t0};
                const Trajectory tr = integrate(s, PathSpec::segment(t0, t0 + cplx(0.05, -0.05)), p);
                for (const Sample& smp : tr.samples) {
                    worst = std::max(worst, std::abs(smp.state[0]));
                    worst = std::max(worst, std::abs(smp.state[1] - X0));
                }
            }
            return worst;
        });
    run(out, ctx, "dynamics.reduced_forms",
        "the reduced equations carry the coefficients -1/(8 pi^2) and -1/(2 pi^2) in front of wp_z", 1e-14,
        [](Context& c) {
            double worst = 0.0;
            for (int i = 0; i < c.n(10, 3); ++i) {
                const ModularParameter tau = c.tau();
                const cplx z{c.uniform(0.1, 0.4), c.uniform(0.1, 0.3)};
                const cplx w = wp_z(z, tau);
                const cplx a = rhs_elliptic(EllipticState{z, 0.0, tau}, PainleveParams::from_alphas({0.5, 0, 0, 0}));
                const cplx b = rhs_elliptic(EllipticState{z, 0.0, tau}, PainleveParams::from_alphas({2, 0, 0, 0}));
                worst = std::max(worst, std::abs(a + w / (8.0 * kPi * kPi)) / std::abs(w));
                worst = std::max(worst, std::abs(b + w / (2.0 * kPi * kPi)) / std::abs(w));
            }
            return worst;
        });
}

// ---------------------------------------------------------------- forms

EllipticState random_state(Context& c)
{
    const ModularParameter tau = c.tau(0.8, 1.5);
    return {cplx{c.uniform(0.1, 0.4), c.uniform(0.05, 0.3)}, cplx{c.uniform(-0.5, 0.5), c.uniform(-0.5, 0.5)}, tau};
}

void forms_suite(std::vector<CheckRecord>& out, Context& ctx)
{
    const std::vector<PainleveParams> ps{PainleveParams::from_alphas({0.125, 0.125, 0, 0}),
                                         PainleveParams::from_alphas({0.3, 0.2, -0.1, 0.05}), PainleveParams()};
    run(out, ctx, "forms.exactness", "omega = dOmega on every coordinate plane", 1e-6, [&](Context& c) {
        double worst = 0.0;
        for (int i = 0; i < c.n(20, 4); ++i) {
            const EllipticState s = random_state(c);
            for (const auto& p : ps)
                for (auto pl : {CoordinatePlane::First, CoordinatePlane::Second, CoordinatePlane::Third})
                    worst = std::max(worst, std::abs(exactness_residual(s, p, pl)));
        }
        return worst;
    });
    run(out, ctx, "forms.exactness_detects_g2",
        "dropping the 2 pi i G2 dtau term breaks the (y, tau)-plane exactness check", 1e-6, [&](Context& c) {
            ExactnessOptions without;
            without.include_g2 = false;
            return std::abs(exactness_residual(random_state(c), ps[0], CoordinatePlane::Second, without));
        },
        true);
    run(out, ctx, "forms.omega_big_g2_invariance",
        "Omega with the G2 term is invariant under Gamma(2) up to the pullback residual", 1e-8, [&](Context& c) {
            double worst = 0.0;
            const ModularElement gs[] = {{1, 0, 2, 1, 1, 0}, {1, 2, 0, 1, -1, 1}, {1, 0, -2, 1}};
            for (const auto& g : gs)
                worst = std::max(worst, omega_big_invariance_residual(random_state(c), ps[1], g));
            return worst;
        });
    run(out, ctx, "forms.invariance", "omega is invariant under the lift of Gamma(2) x Z^2", 1e-8, [&](Context& c) {
        double worst = 0.0;
        std::uniform_int_distribution<long> mn(-5, 5);
        int done = 0;
        while (done < c.n(10, 3)) {
            // Random Gamma(2) elements as words in the generators.
            ModularElement g = ModularElement::shift(mn(c.rng), mn(c.rng));
            const ModularElement gens[] = {{1, 2, 0, 1}, {1, 0, 2, 1}, {1, -2, 0, 1}, {1, 0, -2, 1}};
            for (int k = 0; k < 2; ++k)
                g = g * gens[std::uniform_int_distribution<int>(0, 3)(c.rng)];
            const EllipticState s = random_state(c);
            if (gamma2_act(g, s).tau.imag() < 0.2)
                continue;
            worst = std::max(worst, invariance_residual(s, ps[1], g));
            ++done;
        }
        return worst;
    });
    run(out, ctx, "forms.null_foliation", "solutions are leaves of the null foliation of omega", 1e-7,
        [&](Context& c) {
            double worst = 0.0;
            for (int k = 0; k < c.n(3, 1); ++k) {
                const ModularParameter tau({0.1, 1.1});
                const EllipticState s{{0.23, 0.17}, {0.3, -0.2}, tau};
                const Trajectory tr =
                    integrate(s, PathSpec::segment(tau.value(), tau.value() + cplx(0.05, 0.08)), ps[k]);
                worst = std::max(worst, null_foliation_residual(tr, ps[k]));
            }
            return worst;
        });
    run(out, ctx, "forms.residue", "2 wp_z(z + T_j/2) has leading Laurent coefficient -4", 1e-6, [](Context& c) {
        double worst = 0.0;
        for (int k = 0; k < c.n(5, 2); ++k) {
            const ModularParameter tau = c.tau();
            for (int j = 0; j < 4; ++j)
                worst = std::max(worst, std::abs(omega_j_residue(HalfPeriodIndex(j), tau) + 4.0));
        }
        return worst;
    });
    run(out, ctx, "forms.vanishing_on_divisor",
        "omega for alphas (0,0,0,1/2) vanishes on the tangent planes of U = 0", 1e-9, [](Context& c) {
            double worst = 0.0;
            const PainleveParams p = PainleveParams::from_alphas({0, 0, 0, 0.5});
            for (int i = 0; i < c.n(10, 3); ++i) {
                const EllipticState s = random_state(c);
                worst = std::max(worst, std::abs(divisor_restriction(s.z, s.tau, p)));
            }
            return worst;
        });
    run(out, ctx, "forms.transversal_elsewhere", "omega is nonzero on U = 0 for other parameter points", 1e-3,
        [&](Context& c) {
            double smallest = kInf;
            for (int i = 0; i < c.n(5, 2); ++i) {
                const EllipticState s = random_state(c);
                for (const auto& p : {ps[0], ps[1], PainleveParams::from_alphas({1, 0, 0, 0})})
                    smallest = std::min(smallest, std::abs(divisor_restriction(s.z, s.tau, p)));
            }
            return smallest;
        },
        true);
    run(out, ctx, "forms.vertical_part", "vertical part of omega^(0) equals d nu", 1e-8, [](Context& c) {
        double worst = 0.0;
        for (int i = 0; i < c.n(5, 2); ++i) {
            const EllipticState s = random_state(c);
            const auto v1 = TangentVector::elliptic(c.uniform(-1, 1), c.uniform(-1, 1), 0.0);
            const auto v2 = TangentVector::elliptic(c.uniform(-1, 1), c.uniform(-1, 1), 0.0);
            worst = std::max(worst, std::abs(vertical_part_residual(s, v1, v2)));
        }
        return worst;
    });
}

// ---------------------------------------------------------------- symmetries

void symmetries_suite(std::vector<CheckRecord>& out, Context& ctx)
{
    const ModularParameter tau({0.1, 1.1});
    const EllipticState s0{{0.23, 0.17}, {0.3, -0.2}, tau};
    const PathSpec path{{tau.value(), tau.value() + cplx(0.05, 0.08)}};
    run(out, ctx, "symmetries.landin_identity", "wp_z(z, tau/2) = wp_z(z, tau) + wp_z(z + tau/2, tau)", 1e-9,
        [](Context& c) {
            double worst = 0.0;
            const int g = c.n(8, 3);
            for (int k = 0; k < c.n(3, 1); ++k) {
                const ModularParameter t = c.tau(1.0, 2.0);
                for (int i = 0; i < g; ++i)
                    for (int j = 0; j < g; ++j) {
                        const cplx z = (i + 0.5) / g + (j + 0.5) / g * 0.5 * t.value();
                        const cplx w = wp_z(z, t);
                        worst = std::max(worst, std::abs(landin_identity_residual(z, t)) / std::max(1.0, std::abs(w)));
                    }
            }
            return worst;
        });
    run(out, ctx, "symmetries.landin_transport", "the Landin image of a solution solves the target equation", 1e-6,
        [&](Context&) {
            const Trajectory tr = integrate(s0, path, PainleveParams::from_alphas({0.125, 0.05, 0.125, 0.05}));
            return landin_map(tr).residual;
        });
    run(out, ctx, "symmetries.gamma2_transport", "the Gamma(2) x Z^2 image of a solution solves the same equation",
        1e-6, [&](Context&) {
            const PainleveParams p = PainleveParams::from_alphas({0.3, 0.2, -0.1, 0.05});
            const Trajectory tr = integrate(s0, path, p);
            double worst = 0.0;
            for (const ModularElement& g : {ModularElement(1, 0, 2, 1, 1, -1), ModularElement(1, 2, 0, 1, 0, 1)})
                worst = std::max(worst, rhs_residual(gamma2_act(g, tr), p));
            return worst;
        });
    run(out, ctx, "symmetries.zero_section_transport",
        "translating the zero section by T_i/2 permutes the alphas and maps solutions to solutions", 1e-6,
        [&](Context&) {
            const Trajectory tr = integrate(s0, path, PainleveParams::from_alphas({0.3, 0.2, -0.1, 0.05}));
            double worst = 0.0;
            for (int i = 0; i < 4; ++i) {
                const Trajectory sh = shift_zero_section(HalfPeriodIndex(i), tr);
                worst = std::max(worst, rhs_residual(sh, sh.params));
            }
            return worst;
        });
    run(out, ctx, "symmetries.classification", "solvable families: L, 1/2 + L, the P2 point and its Landin images, the hyperplane",
        0.0, [](Context&) {
            struct Case {
                Quad a;
                SolvabilityTag tag;
            };
            const Case cases[] = {{{0, 0, 0, 0}, SolvabilityTag::ClassicalGeneral},
                                  {{1, 1, 0, 0}, SolvabilityTag::ClassicalGeneral},
                                  {{0.5, 0.5, 0.5, 0.5}, SolvabilityTag::ClassicalGeneral},
                                  {{0, 0, 0, 1}, SolvabilityTag::OneDimFamily},
                                  {{0, 0, 0.5, 0.5}, SolvabilityTag::OneDimFamily},
                                  {{0.25, 0.25, 0.25, 0.25}, SolvabilityTag::OneDimFamily},
                                  {{0.3, 0.7, 0, 0}, SolvabilityTag::HypergeometricHyperplane},
                                  {{0.123, 0.456, 0.789, 0.1}, SolvabilityTag::Unknown}};
            double bad = 0.0;
            for (const Case& k : cases) {
                const SolvabilityClass cl = classify(k.a);
                if (cl.tag != k.tag || !cl.replay(k.a))
                    bad += 1.0;
            }
            return bad;
        });
    run(out, ctx, "symmetries.okamoto_flow", "the Okamoto derivation D restates the algebraic equations of motion",
        1e-12, [](Context&) {
            const Quad a{0.3, 0.2, -0.4, 0.7};
            AlgebraicState s{{0.2, 0.1}, {0.3, 0.4}, 0.0, {0.45, 0.2}};
            s.Y = std::sqrt(s.X * (s.X - 1.0) * (s.X - s.t));
            const AlgebraicRhs r = rhs_algebraic(s, PainleveParams::from_avec(a));
            const cplx dx = okamoto_D([](const AlgebraicState& q) { return q.X; }, s, a);
            const cplx du = okamoto_D([](const AlgebraicState& q) { return q.U; }, s, a);
            return std::max(std::abs(dx - r.dX), std::abs(du - r.dU));
        });
    run(out, ctx, "symmetries.okamoto_h_derivative", "D h agrees with the derivative of h along a solution", 1e-6,
        [](Context&) {
            const Quad a{0.3, 0.2, -0.4, 0.7};
            AlgebraicState s{{0.2, 0.1}, {0.3, 0.4}, 0.0, {0.45, 0.2}};
            s.Y = std::sqrt(s.X * (s.X - 1.0) * (s.X - s.t));
            const Trajectory tr = integrate(s, PathSpec::segment(s.t, s.t + cplx(0.05, 0.03)), PainleveParams::from_avec(a));
            std::vector<cplx> t, h;
            for (std::size_t i = 0; i < tr.size(); ++i) {
                t.push_back(tr.samples[i].base);
                h.push_back(okamoto_h(tr.algebraic(i), a));
            }
            double worst = 0.0;
            const Observable hf = [&](const AlgebraicState& q) { return okamoto_h(q, a); };
            for (std::size_t i = 3; i + 3 < tr.size(); i += 2) {
                const cplx d = sampled_derivative(t, h, t[i], 1);
                worst = std::max(worst, std::abs(okamoto_D(hf, tr.algebraic(i), a) - d));
            }
            return worst;
        });
}

using SuiteFn = void (*)(std::vector<CheckRecord>&, Context&);

const std::vector<std::pair<std::string, SuiteFn>>& registry()
{
    static const std::vector<std::pair<std::string, SuiteFn>> r{
        {"elliptic", elliptic_suite},         {"uniformization", uniformization_suite},
        {"picard_fuchs", picard_fuchs_suite}, {"dynamics", dynamics_suite},
        {"forms", forms_suite},               {"symmetries", symmetries_suite}};
    return r;
}

} // namespace

bool VerificationReport::passed() const
{
    return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

bool VerificationReport::infrastructure_error() const
{
    return std::any_of(records.begin(), records.end(), [](const CheckRecord& r) { return !r.error.empty(); });
}

std::string VerificationReport::to_json() const
{
    nlohmann::json recs = nlohmann::json::array();
    for (const CheckRecord& r : records) {
        nlohmann::json j = {{"name", r.name},
                            {"anchor", r.anchor},
                            {"residual", r.residual},
                            {"threshold", r.threshold},
                            {"comparison", r.at_least ? ">=" : "<="},
                            {"pass", r.pass}};
        if (!std::isfinite(r.residual))
            j["residual"] = nullptr;
        if (!r.error.empty())
            j["error"] = r.error;
        recs.push_back(j);
    }
    return nlohmann::json{{"suite", suite}, {"status", passed() ? "pass" : "fail"}, {"records", recs}}.dump(2) + "\n";
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : registry())
            n.push_back(name);
        n.push_back("all");
        return n;
    }();
    return names;
}

bool is_suite(std::string_view name)
{
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

VerificationReport run_suite(std::string_view name, const SuiteOptions& opts)
{
    if (!is_suite(name))
        throw Error(ErrorKind::InvalidArgument, "unknown suite '" + std::string(name) + "'");
    VerificationReport rep{std::string(name), {}};
    for (std::size_t i = 0; i < registry().size(); ++i) {
        const auto& [suite, fn] = registry()[i];
        if (name != "all" && name != suite)
            continue;
        // One generator per suite so that a suite's records do not depend on
        // which other suites ran.
        Context ctx{opts.quick, std::mt19937_64(opts.seed + i)};
        fn(rep.records, ctx);
    }
    std::sort(rep.records.begin(), rep.records.end(),
              [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    return rep;
}

} // namespace pvi::cli
