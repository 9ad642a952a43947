#pragma once

namespace qbeat::constants {

// Energies are stored as E/h in GHz throughout; time is in ns, so a state at
// energy E acquires the phase exp(-i 2*pi * (E/h)[GHz] * t[ns]).
inline constexpr double ghz_per_cm1 = 29.9792458;

// Bohr magneton over Planck constant, GHz per tesla.
inline constexpr double bohr_magneton_ghz_per_tesla = 13.9962449;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double ghz_from_cm1(double e_cm1) { return e_cm1 * ghz_per_cm1; }
inline constexpr double cm1_from_ghz(double e_ghz) { return e_ghz / ghz_per_cm1; }

}  // namespace qbeat::constants
