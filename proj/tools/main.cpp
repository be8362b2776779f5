// pvi: command-line front end.
//
// Exit codes: 0 success, 1 verification failure or invalid input, 2 numerical
// failure, 3 integration aborted near a pole, 64 usage error.

#include "parse.hpp"
#include "suites.hpp"

#include <pvi/forms.hpp>
#include <pvi/symmetry.hpp>
#include <pvi/trajectory_io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace pvi;
using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitPole = 3;
constexpr int kExitUsage = 64;

struct Settings {
    std::string function;
    std::string tau, t, z, params = "alphas:0,0,0,0", chart = "elliptic", init, lift, path, out, format = "csv";
    std::string suite, input, element, target;
    std::vector<double> avec;
    int index = 0;
    double tol = 1e-12, spacing = 0.005, max_step = 0.02;
    bool quick = false, inverse = false;
    unsigned long seed = 20240601;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    f << text;
}

json cj(cplx v) { return json::array({v.real(), v.imag()}); }

ModularParameter need_tau(const Settings& s)
{
    if (s.tau.empty())
        throw Error(ErrorKind::InvalidArgument, "--tau is required");
    return ModularParameter(cli::parse_complex(s.tau));
}

// ------------------------------------------------------------------ eval

int cmd_eval(const Settings& s)
{
    auto print = [](cplx v) { std::printf("%s\n", format_complex(v).c_str()); };
    const std::string& f = s.function;
    if (f == "lambda") {
        print(modular_lambda(need_tau(s)));
    } else if (f == "C") {
        print(constant_c(need_tau(s)));
    } else if (f == "G2") {
        print(eisenstein_g2(need_tau(s)));
    } else if (f == "e_i" || f == "e") {
        const HalfPeriodValues e = half_period_values(need_tau(s));
        print(e.e1);
        print(e.e2);
        print(e.e3);
    } else if (f == "wp" || f == "wp_z" || f == "theta" || f == "v") {
        if (s.z.empty())
            throw Error(ErrorKind::InvalidArgument, "--z is required");
        const cplx z = cli::parse_complex(s.z);
        const ModularParameter tau = need_tau(s);
        if (f == "wp")
            print(wp(z, tau));
        else if (f == "wp_z")
            print(wp_z(z, tau));
        else if (f == "theta")
            print(theta(z, tau));
        else
            print(theta_v(z, tau));
    } else {
        throw CLI::ValidationError("function", "unknown function '" + f + "'");
    }
    return 0;
}

// ------------------------------------------------------------------ solve

PathSpec parse_path(const std::string& text, cplx start)
{
    PathSpec p;
    p.vertices = cli::parse_complex_list(text);
    if (p.vertices.empty())
        throw Error(ErrorKind::InvalidPath, "--path needs at least one vertex");
    if (std::abs(p.vertices.front() - start) > 1e-14)
        p.vertices.insert(p.vertices.begin(), start);
    return p;
}

int cmd_solve(const Settings& s)
{
    const PainleveParams p = cli::parse_params(s.params);
    const Chart chart = chart_from_string(s.chart);
    const TrajectoryFormat fmt = trajectory_format_from_string(s.format);
    IntegratorConfig cfg;
    cfg.rtol = s.tol;
    cfg.atol = 0.1 * s.tol;
    cfg.sample_spacing = s.spacing;
    cfg.max_step = s.max_step;
    cfg.validate();

    std::optional<AnyState> init;
    cplx base;
    if (chart == Chart::Elliptic) {
        const ModularParameter tau = need_tau(s);
        base = tau.value();
        if (!s.lift.empty()) {
            const auto ef = cli::parse_complex_list(s.lift);
            if (ef.size() != 2 || ef[0].imag() != 0.0 || ef[1].imag() != 0.0)
                throw Error(ErrorKind::InvalidArgument, "--lift takes two real numbers e,f");
            init = canonical_lift(ef[0].real(), ef[1].real(), tau).elliptic;
        } else {
            const auto zy = cli::parse_complex_list(s.init);
            if (zy.size() != 2)
                throw Error(ErrorKind::InvalidArgument, "elliptic --init is z,y");
            init = EllipticState{zy[0], zy[1], tau};
        }
    } else {
        if (s.t.empty())
            throw Error(ErrorKind::InvalidArgument, "--t is required");
        base = cli::parse_complex(s.t);
        const auto v = cli::parse_complex_list(s.init);
        if (chart == Chart::Classical) {
            if (v.size() != 2)
                throw Error(ErrorKind::InvalidArgument, "classical --init is X,X'");
            init = ClassicalState{v[0], v[1], base};
        } else {
            if (v.size() != 2 && v.size() != 3)
                throw Error(ErrorKind::InvalidArgument, "algebraic --init is U,X[,Y]");
            const cplx X = v[1];
            cplx Y = std::sqrt(X * (X - 1.0) * (X - base));
            if (v.size() == 3) {
                if (std::abs(v[2] * v[2] - X * (X - 1.0) * (X - base)) > 1e-8 * std::max(1.0, std::norm(v[2])))
                    throw Error(ErrorKind::InvalidArgument, "Y is not on the curve");
                Y = v[2];
            }
            init = AlgebraicState{v[0], X, Y, base};
        }
    }
    const PathSpec path = parse_path(s.path, base);
    try {
        emit(encode(integrate(*init, path, p, cfg), fmt), s.out);
    } catch (const PoleApproachError& e) {
        emit(encode(e.partial(), fmt), s.out);
        std::fprintf(stderr, "pvi: %s at %s\n", e.what(), format_complex(e.location()).c_str());
        return kExitPole;
    }
    return 0;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const Settings& s)
{
    if (!cli::is_suite(s.suite))
        throw CLI::ValidationError("suite", "unknown suite '" + s.suite + "'");
    const cli::VerificationReport rep = cli::run_suite(s.suite, {s.quick, s.seed});
    emit(rep.to_json(), s.out);
    if (rep.infrastructure_error())
        return kExitNumeric;
    return rep.passed() ? 0 : kExitFail;
}

// ------------------------------------------------------------------ classify

json witness_json(const SolvabilityClass& c)
{
    json steps = json::array();
    for (const WitnessStep& w : c.witness) {
        json j = {{"kind", std::string(to_string(w.kind))}};
        if (w.kind == WitnessStep::Kind::W)
            j["w"] = {{"eps", w.w.eps}, {"perm", w.w.perm}, {"shift", w.w.shift}};
        steps.push_back(j);
    }
    return steps;
}

int cmd_classify(const Settings& s)
{
    if (s.avec.size() != 4)
        throw CLI::ValidationError("a", "classify takes four numbers");
    const Quad a{s.avec[0], s.avec[1], s.avec[2], s.avec[3]};
    const SolvabilityClass c = classify(a);
    json base = json::array();
    for (const cplx& v : c.base_point)
        base.push_back(v.real());
    const json out = {{"a", s.avec},
                      {"tag", std::string(to_string(c.tag))},
                      {"base_point", base},
                      {"witness", witness_json(c)},
                      {"replays", c.replay(a)}};
    emit(out.dump(2) + "\n", s.out);
    return 0;
}

// ------------------------------------------------------------------ landin

int cmd_landin(const Settings& s)
{
    const LandinDirection dir = s.inverse ? LandinDirection::Inverse : LandinDirection::Forward;
    if (s.input.empty()) {
        const PainleveParams out = landin(cli::parse_params(s.params), dir);
        emit(json::parse(params_json(out)).dump(2) + "\n", s.out);
        return 0;
    }
    const Trajectory tr = decode(read_file(s.input));
    const LandinResult r = landin_map(tr, dir);
    emit(encode(r.trajectory, trajectory_format_from_string(s.format)), s.out);
    std::fprintf(stderr, "pvi: base scale %g, residual %.3e (other scale %.3e)\n", r.scale, r.residual,
                 r.rejected_residual);
    return 0;
}

// ------------------------------------------------------------------ symmetry

ModularElement parse_element(const std::string& text)
{
    const auto v = cli::parse_complex_list(text);
    if (v.size() != 4 && v.size() != 6)
        throw Error(ErrorKind::InvalidArgument, "--element is a,b,c,d[,m,n]");
    long k[6] = {0, 0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].imag() != 0.0 || v[i].real() != std::round(v[i].real()))
            throw Error(ErrorKind::InvalidArgument, "--element entries are integers");
        k[i] = static_cast<long>(v[i].real());
    }
    return {k[0], k[1], k[2], k[3], k[4], k[5]};
}

int cmd_symmetry(const Settings& s)
{
    const bool gamma = s.target == "gamma2";
    if (!gamma && s.target != "shift")
        throw CLI::ValidationError("action", "action is gamma2 or shift");
    if (!s.input.empty()) {
        const Trajectory tr = decode(read_file(s.input));
        const Trajectory out = gamma ? gamma2_act(parse_element(s.element), tr)
                                     : shift_zero_section(HalfPeriodIndex(s.index), tr);
        emit(encode(out, trajectory_format_from_string(s.format)), s.out);
        return 0;
    }
    const auto zy = cli::parse_complex_list(s.init);
    if (zy.size() != 2)
        throw Error(ErrorKind::InvalidArgument, "--init is z,y");
    const EllipticState st{zy[0], zy[1], need_tau(s)};
    const PainleveParams p = cli::parse_params(s.params);
    EllipticState img = st;
    PainleveParams q = p;
    if (gamma) {
        img = gamma2_act(parse_element(s.element), st);
    } else {
        const ShiftedSection sh = shift_zero_section(HalfPeriodIndex(s.index), st, p);
        img = sh.state;
        q = sh.params;
    }
    const json out = {{"z", cj(img.z)}, {"y", cj(img.y)}, {"tau", cj(img.tau.value())},
                      {"params", json::parse(params_json(q))}};
    emit(out.dump(2) + "\n", s.out);
    return 0;
}

// ------------------------------------------------------------------ convert

int cmd_convert(const Settings& s)
{
    const Trajectory tr = decode(read_file(s.input));
    ChartContext ctx;
    if (!s.tau.empty())
        ctx.tau = ModularParameter(cli::parse_complex(s.tau));
    const Trajectory out = convert_trajectory(tr, chart_from_string(s.chart), ctx);
    emit(encode(out, trajectory_format_from_string(s.format)), s.out);
    return 0;
}

// ------------------------------------------------------------------ config

/// Fills settings whose flags were not given from a JSON object.
void apply_config(const json& cfg, CLI::App& sub, Settings& s)
{
    auto str = [&](const char* key, std::string& field) {
        if (cfg.contains(key) && sub.count(std::string("--") + key) == 0) {
            const json& v = cfg[key];
            field = v.is_string() ? v.get<std::string>() : v.dump();
        }
    };
    auto num = [&](const char* key, auto& field) {
        if (cfg.contains(key) && sub.count(std::string("--") + key) == 0)
            field = cfg[key].get<std::remove_reference_t<decltype(field)>>();
    };
    for (const char* k : {"tau", "t", "z", "chart", "init", "lift", "path", "out", "format", "input", "element"})
        if (sub.get_option_no_throw(std::string("--") + k))
            str(k, k == std::string("tau")     ? s.tau
                   : k == std::string("t")     ? s.t
                   : k == std::string("z")     ? s.z
                   : k == std::string("chart") ? s.chart
                   : k == std::string("init")  ? s.init
                   : k == std::string("lift")  ? s.lift
                   : k == std::string("path")  ? s.path
                   : k == std::string("out")   ? s.out
                   : k == std::string("format") ? s.format
                   : k == std::string("input") ? s.input
                                               : s.element);
    if (sub.get_option_no_throw("--params") && cfg.contains("params") && sub.count("--params") == 0) {
        const json& p = cfg["params"];
        if (p.is_string()) {
            s.params = p.get<std::string>();
        } else {
            // {"alphas": [..4 numbers or [re, im] pairs..]}
            const auto it = p.begin();
            std::string text = it.key() + ":";
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& v = (*it)[i];
                char buf[96];
                if (v.is_array())
                    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v[0].get<double>(), v[1].get<double>());
                else
                    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
                text += (i ? "," : "") + std::string(buf);
            }
            s.params = text;
        }
    }
    if (sub.get_option_no_throw("--tol"))
        num("tol", s.tol);
    if (sub.get_option_no_throw("--spacing"))
        num("spacing", s.spacing);
    if (sub.get_option_no_throw("--max-step") && cfg.contains("max_step") && sub.count("--max-step") == 0)
        s.max_step = cfg["max_step"].get<double>();
    if (sub.get_option_no_throw("--quick") && cfg.contains("quick") && sub.count("--quick") == 0)
        s.quick = cfg["quick"].get<bool>();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerics for the sixth Painleve equation: special functions, integration in three charts, "
                 "symmetries and verification suites."};
    app.require_subcommand(1);
    Settings s;
    std::string config;
    app.add_option("--config", config, "JSON file with option values; flags override it");

    auto tol_opts = [&](CLI::App* c) {
        c->add_option("--tol", s.tol, "relative tolerance")->check(CLI::PositiveNumber);
        c->add_option("--spacing", s.spacing, "output sample spacing along the path")->check(CLI::PositiveNumber);
        c->add_option("--max-step", s.max_step, "largest integrator step")->check(CLI::PositiveNumber);
    };
    const std::string param_help = "parameter point <rep>:v0,v1,v2,v3 with rep classical|alphas|avec (or aliases)";

    CLI::App* eval = app.add_subcommand("eval", "evaluate wp, wp_z, theta, v, e_i, G2, lambda or C");
    eval->add_option("function", s.function)->required();
    eval->add_option("--tau", s.tau, "modular parameter, e.g. 0.1+1.2i");
    eval->add_option("--z", s.z, "point in the torus");

    CLI::App* solve = app.add_subcommand("solve", "integrate along a path and write the trajectory");
    solve->add_option("--chart", s.chart, "elliptic | classical | algebraic");
    solve->add_option("--params", s.params, param_help);
    solve->add_option("--tau", s.tau, "initial tau (elliptic chart)");
    solve->add_option("--t", s.t, "initial t (classical and algebraic charts)");
    solve->add_option("--init", s.init, "initial state: z,y | X,X' | U,X[,Y]");
    solve->add_option("--lift", s.lift, "elliptic initial state z = e tau + f, y = e from e,f");
    solve->add_option("--path", s.path, "polyline vertices separated by ';'");
    solve->add_option("--out", s.out, "output file (stdout if absent)");
    solve->add_option("--format", s.format, "csv | json");
    tol_opts(solve);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", s.suite, "elliptic | uniformization | picard_fuchs | dynamics | forms | symmetries | all")
        ->required();
    verify->add_flag("--quick", s.quick, "reduced sample counts");
    verify->add_option("--seed", s.seed, "random seed");
    verify->add_option("--out", s.out, "report file (stdout if absent)");

    CLI::App* classify_cmd = app.add_subcommand("classify", "solvability class of an a-vector");
    classify_cmd->add_option("a", s.avec, "a0 a1 a2 a3")->required()->expected(4);
    classify_cmd->add_option("--out", s.out, "output file");

    CLI::App* landin_cmd = app.add_subcommand("landin", "Landin transform of parameters or of a trajectory");
    landin_cmd->add_option("--params", s.params, param_help);
    landin_cmd->add_flag("--inverse", s.inverse, "map (a, b, 0, 0) back to (a/4, b/4, a/4, b/4)");
    landin_cmd->add_option("--input", s.input, "elliptic trajectory file");
    landin_cmd->add_option("--out", s.out, "output file");
    landin_cmd->add_option("--format", s.format, "csv | json");

    CLI::App* sym = app.add_subcommand("symmetry", "apply gamma2 (Gamma(2) x Z^2) or shift (zero section)");
    sym->add_option("action", s.target, "gamma2 | shift")->required();
    sym->add_option("--element", s.element, "a,b,c,d[,m,n]");
    sym->add_option("--index", s.index, "half-period index 0..3")->check(CLI::Range(0, 3));
    sym->add_option("--input", s.input, "elliptic trajectory file");
    sym->add_option("--tau", s.tau, "tau of a single state");
    sym->add_option("--init", s.init, "single state z,y");
    sym->add_option("--params", s.params, param_help);
    sym->add_option("--out", s.out, "output file");
    sym->add_option("--format", s.format, "csv | json");

    CLI::App* conv = app.add_subcommand("convert", "convert a trajectory to another chart");
    conv->add_option("--input", s.input, "trajectory file")->required();
    conv->add_option("--chart", s.chart, "target chart")->required();
    conv->add_option("--tau", s.tau, "seed for the lambda inversion");
    conv->add_option("--out", s.out, "output file");
    conv->add_option("--format", s.format, "csv | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (!config.empty())
            apply_config(json::parse(read_file(config)), *sub, s);
        if (sub == eval)
            return cmd_eval(s);
        if (sub == solve)
            return cmd_solve(s);
        if (sub == verify)
            return cmd_verify(s);
        if (sub == classify_cmd)
            return cmd_classify(s);
        if (sub == landin_cmd)
            return cmd_landin(s);
        if (sub == sym)
            return cmd_symmetry(s);
        return cmd_convert(s);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "pvi: %s\n", e.what());
        return kExitUsage;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "pvi: bad config: %s\n", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "pvi: %s\n", e.what());
        switch (e.kind()) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::InvalidPath:
        case ErrorKind::PatternMismatch:
        case ErrorKind::InconsistentContext:
        case ErrorKind::InconsistentTau:
            return kExitFail;
        case ErrorKind::PoleApproach:
            return kExitPole;
        default:
            return kExitNumeric;
        }
    }
}
