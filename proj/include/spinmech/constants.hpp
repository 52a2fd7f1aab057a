// Physical constants (SI) and unit conversions used across the library.
#pragma once

namespace spinmech {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018 exact / recommended values
inline constexpr double k_boltzmann = 1.380649e-23;       // J/K
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double avogadro = 6.02214076e23;         // 1/mol
inline constexpr double amu = 1.66053906660e-27;          // kg

// Electron gyromagnetic ratio, rad s^-1 T^-1 (28.0249 GHz/T)
inline constexpr double gamma_electron = 1.76086e11;

// NV ground-state zero-field splitting, rad/s
inline constexpr double nv_zero_field_splitting = two_pi * 2.88e9;

// Mean molecular mass of air, kg
inline constexpr double air_molecule_mass = 28.97e-3 / avogadro;

inline constexpr double gauss_to_tesla = 1e-4;
inline constexpr double mbar_to_pascal = 100.0;
inline constexpr double deg_to_rad = pi / 180.0;

// Ordinary frequency (Hz) <-> angular frequency (rad/s)
inline constexpr double hz_to_rad(double f) { return two_pi * f; }
inline constexpr double rad_to_hz(double w) { return w / two_pi; }

} // namespace spinmech
