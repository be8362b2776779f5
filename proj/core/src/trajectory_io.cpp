#include <pvi/trajectory_io.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace pvi {

using nlohmann::json;

std::string_view to_string(TrajectoryFormat f) noexcept { return f == TrajectoryFormat::Csv ? "csv" : "json"; }

TrajectoryFormat trajectory_format_from_string(std::string_view name)
{
    if (name == "csv")
        return TrajectoryFormat::Csv;
    if (name == "json")
        return TrajectoryFormat::Json;
    throw Error(ErrorKind::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

namespace {

std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw Error(ErrorKind::InvalidArgument, "malformed number '" + s + "'");
    return v;
}

json cjson(cplx v) { return json::array({v.real(), v.imag()}); }

cplx from_cjson(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorKind::InvalidArgument, "complex numbers are encoded as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json quad_json(const Quad& q)
{
    json a = json::array();
    for (const cplx& v : q)
        a.push_back(cjson(v));
    return a;
}

Quad quad_from(const json& j)
{
    if (!j.is_array() || j.size() != 4)
        throw Error(ErrorKind::InvalidArgument, "parameter vectors have four entries");
    Quad q{};
    for (int i = 0; i < 4; ++i)
        q[i] = from_cjson(j[i]);
    return q;
}

json params_object(const PainleveParams& p)
{
    return {{"source", std::string(to_string(p.source()))},
            {"classical", quad_json(p.classical())},
            {"alphas", quad_json(p.alphas())},
            {"avec", quad_json(p.avec())}};
}

PainleveParams params_from(const json& j)
{
    const ParamRep rep = param_rep_from_string(j.at("source").get<std::string>());
    return PainleveParams::from(rep, quad_from(j.at(std::string(to_string(rep)))));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::string format_complex(cplx v)
{
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.16g%+.16gi", v.real(), v.imag());
    return buf;
}

std::string params_json(const PainleveParams& p) { return params_object(p).dump(); }

std::string encode_csv(const Trajectory& tr)
{
    const int dim = chart_dimension(tr.chart);
    const PainleveParams& p = tr.params;
    std::string out = "# chart=" + std::string(to_string(tr.chart)) + "\n# params " +
                      std::string(to_string(p.source()));
    for (const cplx& v : p.get(p.source()))
        out += " " + g17(v.real()) + " " + g17(v.imag());
    out += "\nbase_re,base_im";
    for (int k = 0; k < dim; ++k)
        out += ",s" + std::to_string(k) + "_re,s" + std::to_string(k) + "_im";
    out += ",err\n";
    for (const Sample& s : tr.samples) {
        out += g17(s.base.real()) + "," + g17(s.base.imag());
        for (int k = 0; k < dim; ++k)
            out += "," + g17(s.state[k].real()) + "," + g17(s.state[k].imag());
        out += "," + g17(s.err) + "\n";
    }
    return out;
}

std::string encode_json(const Trajectory& tr)
{
    const int dim = chart_dimension(tr.chart);
    json samples = json::array();
    for (const Sample& s : tr.samples) {
        json st = json::array();
        for (int k = 0; k < dim; ++k)
            st.push_back(cjson(s.state[k]));
        samples.push_back({{"base", cjson(s.base)}, {"state", st}, {"err", s.err}});
    }
    json j = {{"chart", std::string(to_string(tr.chart))}, {"params", params_object(tr.params)}, {"samples", samples}};
    if (!tr.generalized.empty()) {
        json g = json::array();
        for (const TorsionTerm& t : tr.generalized)
            g.push_back({{"r", t.r}, {"s", t.s}, {"alpha", cjson(t.alpha)}});
        j["generalized"] = g;
    }
    return j.dump(1) + "\n";
}

std::string encode(const Trajectory& tr, TrajectoryFormat f)
{
    return f == TrajectoryFormat::Csv ? encode_csv(tr) : encode_json(tr);
}

Trajectory decode_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    Trajectory tr;
    bool have_chart = false, have_params = false, have_header = false;
    int dim = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.rfind("# chart=", 0) == 0) {
            tr.chart = chart_from_string(line.substr(8));
            dim = chart_dimension(tr.chart);
            have_chart = true;
            continue;
        }
        if (line.rfind("# params ", 0) == 0) {
            std::istringstream ps(line.substr(9));
            std::string rep;
            ps >> rep;
            Quad q{};
            for (cplx& v : q) {
                std::string re, im;
                if (!(ps >> re >> im))
                    throw Error(ErrorKind::InvalidArgument, "CSV params line needs four complex values");
                v = {parse_double(re), parse_double(im)};
            }
            tr.params = PainleveParams::from(param_rep_from_string(rep), q);
            have_params = true;
            continue;
        }
        if (line[0] == '#')
            continue;
        if (!have_header) {
            if (line.rfind("base_re", 0) != 0)
                throw Error(ErrorKind::InvalidArgument, "CSV header missing");
            have_header = true;
            continue;
        }
        if (!have_chart)
            throw Error(ErrorKind::InvalidArgument, "CSV chart line missing");
        const auto cells = split(line, ',');
        if (static_cast<int>(cells.size()) != 3 + 2 * dim)
            throw Error(ErrorKind::InvalidArgument, "CSV row has the wrong number of columns");
        Sample s;
        s.base = {parse_double(cells[0]), parse_double(cells[1])};
        for (int k = 0; k < dim; ++k)
            s.state[k] = {parse_double(cells[2 + 2 * k]), parse_double(cells[3 + 2 * k])};
        s.err = parse_double(cells.back());
        tr.samples.push_back(s);
    }
    if (!have_chart || !have_params || !have_header)
        throw Error(ErrorKind::InvalidArgument, "CSV trajectory is missing its preamble");
    return tr;
}

Trajectory decode_json(const std::string& text)
{
    try {
        const json j = json::parse(text);
        Trajectory tr;
        tr.chart = chart_from_string(j.at("chart").get<std::string>());
        tr.params = params_from(j.at("params"));
        const int dim = chart_dimension(tr.chart);
        for (const json& s : j.at("samples")) {
            Sample out;
            out.base = from_cjson(s.at("base"));
            const json& st = s.at("state");
            if (!st.is_array() || static_cast<int>(st.size()) != dim)
                throw Error(ErrorKind::InvalidArgument, "sample state has the wrong length");
            for (int k = 0; k < dim; ++k)
                out.state[k] = from_cjson(st[k]);
            out.err = s.at("err").get<double>();
            tr.samples.push_back(out);
        }
        if (j.contains("generalized"))
            for (const json& g : j["generalized"])
                tr.generalized.push_back({g.at("r").get<double>(), g.at("s").get<double>(), from_cjson(g.at("alpha"))});
        return tr;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("malformed trajectory JSON: ") + e.what());
    }
}

Trajectory decode(const std::string& text)
{
    const auto pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && text[pos] == '{')
        return decode_json(text);
    return decode_csv(text);
}

} // namespace pvi
