#ifndef PVI_TYPES_HPP
#define PVI_TYPES_HPP

#include <array>
#include <complex>
#include <numbers>

namespace pvi {

using cplx = std::complex<double>;
using Quad = std::array<cplx, 4>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

/// 1/(2 pi i)^2 = -1/(4 pi^2), the prefactor of the elliptic-chart force.
inline constexpr double kForcePrefactor = -1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

} // namespace pvi

#endif
