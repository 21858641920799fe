#pragma once

#include <numbers>

namespace stql::units {

// SI-exact since 2019 except the vacuum permittivity (CODATA 2018).
inline constexpr double planck_j_s = 6.62607015e-34;
inline constexpr double speed_of_light_m_s = 299792458.0;
inline constexpr double vacuum_permittivity_f_m = 8.8541878128e-12;

/// One Debye in C*m (10^-21 / c).
inline constexpr double debye_c_m = 1e-21 / speed_of_light_m_s;

/// mu * eps / h in MHz for mu = 1 D and eps = 1 V/cm (about 0.503412).
inline constexpr double stark_mhz_per_debye_v_cm = debye_c_m * 100.0 / planck_j_s * 1e-6;

/// mu^2 / (4 pi eps0 r^3 h) in Hz for mu = 1 D and r = 1 um (about 150.92).
inline constexpr double dipolar_hz_per_debye2_um3 =
    debye_c_m * debye_c_m / (4.0 * std::numbers::pi * vacuum_permittivity_f_m * 1e-18) / planck_j_s;

inline constexpr double deg_to_rad = std::numbers::pi / 180.0;

}  // namespace stql::units
