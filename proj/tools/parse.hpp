#ifndef PVI_TOOLS_PARSE_HPP
#define PVI_TOOLS_PARSE_HPP

#include <pvi/params.hpp>

#include <string>
#include <vector>

namespace pvi::cli {

/// Parses "1.5", "2i", "-i", "0.1+1.07i", "3e-2-4.5e1i" ("j" is accepted for
/// "i"). Throws InvalidArgument.
cplx parse_complex(const std::string& text);

/// Comma- or semicolon-separated complex literals.
std::vector<cplx> parse_complex_list(const std::string& text);

/// "<rep>:v0,v1,v2,v3" with rep one of the spellings of classical, alphas or
/// avec (see param_rep_spellings).
PainleveParams parse_params(const std::string& text);

/// Accepted prefixes for each representation.
const std::vector<std::pair<std::string, ParamRep>>& param_rep_spellings();

} // namespace pvi::cli

#endif
