#include "parse.hpp"

#include <pvi/error.hpp>

#include <cctype>
#include <cstdlib>

namespace pvi::cli {

namespace {

[[noreturn]] void bad(const std::string& text)
{
    throw Error(ErrorKind::InvalidArgument, "cannot parse complex number '" + text + "'");
}

double real_part(const std::string& s, const std::string& whole)
{
    if (s.empty() || s == "+")
        return 1.0;
    if (s == "-")
        return -1.0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        bad(whole);
    return v;
}

std::string strip(const std::string& s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out += c;
    return out;
}

} // namespace

cplx parse_complex(const std::string& text)
{
    const std::string s = strip(text);
    if (s.empty())
        bad(text);
    const char last = s.back();
    if (last != 'i' && last != 'j' && last != 'I' && last != 'J') {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size())
            bad(text);
        return v;
    }
    const std::string body = s.substr(0, s.size() - 1);
    // The imaginary part starts at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        const std::string im = body;
        if (!im.empty() && im != "+" && im != "-") {
            char* end = nullptr;
            std::strtod(im.c_str(), &end);
            if (end != im.c_str() + im.size())
                bad(text);
        }
        return {0.0, real_part(im, text)};
    }
    const std::string re = body.substr(0, split), im = body.substr(split);
    char* end = nullptr;
    const double r = std::strtod(re.c_str(), &end);
    if (re.empty() || end != re.c_str() + re.size())
        bad(text);
    return {r, real_part(im, text)};
}

std::vector<cplx> parse_complex_list(const std::string& text)
{
    std::vector<cplx> out;
    std::string cur;
    for (char c : text) {
        if (c == ',' || c == ';') {
            out.push_back(parse_complex(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!strip(cur).empty() || !out.empty())
        out.push_back(parse_complex(cur));
    return out;
}

const std::vector<std::pair<std::string, ParamRep>>& param_rep_spellings()
{
    static const std::vector<std::pair<std::string, ParamRep>> s{
        {"classical", ParamRep::Classical}, {"classic", ParamRep::Classical}, {"greek", ParamRep::Classical},
        {"abgd", ParamRep::Classical},      {"alphas", ParamRep::Alphas},     {"alpha", ParamRep::Alphas},
        {"alpha_i", ParamRep::Alphas},      {"al", ParamRep::Alphas},         {"avec", ParamRep::AVec},
        {"a", ParamRep::AVec},              {"a_i", ParamRep::AVec},          {"a-vector", ParamRep::AVec}};
    return s;
}

PainleveParams parse_params(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw Error(ErrorKind::InvalidArgument, "parameters are given as <rep>:v0,v1,v2,v3");
    const std::string rep = strip(text.substr(0, colon));
    for (const auto& [name, r] : param_rep_spellings()) {
        if (name != rep)
            continue;
        const auto v = parse_complex_list(text.substr(colon + 1));
        if (v.size() != 4)
            throw Error(ErrorKind::InvalidArgument, "a parameter point has four components");
        return PainleveParams::from(r, {v[0], v[1], v[2], v[3]});
    }
    throw Error(ErrorKind::InvalidArgument, "unknown parameter representation '" + rep + "'");
}

} // namespace pvi::cli
