#ifndef PVI_TRAJECTORY_IO_HPP
#define PVI_TRAJECTORY_IO_HPP

// Lossless text encodings of trajectories.
//
// CSV: two comment lines (# chart=..., # params <rep> v0 ... v3 as re/im
// pairs), a header, then one row per sample:
//     base_re,base_im,s0_re,s0_im,...,err
// JSON: {chart, params:{source, classical, alphas, avec}, samples:[{base, state, err}]}
// with complex numbers as [re, im]. Doubles are written with 17 significant
// digits so both formats round-trip exactly.

#include <pvi/dynamics.hpp>

#include <iosfwd>
#include <string>

namespace pvi {

enum class TrajectoryFormat { Csv, Json };

std::string_view to_string(TrajectoryFormat f) noexcept;
/// "csv" or "json".
TrajectoryFormat trajectory_format_from_string(std::string_view name);

std::string encode_csv(const Trajectory& tr);
std::string encode_json(const Trajectory& tr);
std::string encode(const Trajectory& tr, TrajectoryFormat f);

/// Throw InvalidArgument on malformed input.
Trajectory decode_csv(const std::string& text);
Trajectory decode_json(const std::string& text);
/// Sniffs the format from the first non-blank character.
Trajectory decode(const std::string& text);

/// The same as encode_json for one parameter point.
std::string params_json(const PainleveParams& p);

/// "re+im i" with 16 significant digits.
std::string format_complex(cplx v);

} // namespace pvi

#endif
