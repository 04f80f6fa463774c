#pragma once

#include <numbers>

namespace nv {

inline constexpr double pi = std::numbers::pi;
inline constexpr double twopi = 2.0 * pi;

// gyromagnetic ratios, rad/s/T
inline constexpr double gamma_c13 = twopi * 10.705e6;
inline constexpr double gamma_e = twopi * 28.024e9;

// diamond conventional cell, nm
inline constexpr double diamond_a = 0.3567;

inline constexpr double hbar_si = 1.054571817e-34;   // J s
inline constexpr double mu0_over_4pi = 1e-7;         // T m / A

// dipolar radial constants, rad/s at 1 nm separation.
// electron-nucleus uses the full (mu0/4pi) gamma_e gamma_n hbar;
// nucleus-nucleus is calibrated to half of it (pins the r0-dimer coupling
// at 2pi x 0.685 kHz, see internuclear_coupling tests).
inline constexpr double hyperfine_radial_nm3 =
    mu0_over_4pi * gamma_e * gamma_c13 * hbar_si * 1e27;
inline constexpr double internuclear_radial_nm3 =
    0.5 * mu0_over_4pi * gamma_c13 * gamma_c13 * hbar_si * 1e27;

// nearest-neighbour distance in diamond, nm
inline constexpr double diamond_r0 = diamond_a * std::numbers::sqrt3 / 4.0;

}  // namespace nv
