// Core domain types: NV spin parameters, static/microwave field, mechanical mode.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinmech/constants.hpp"

namespace spinmech {

// Invalid user input (config files, constructor arguments). CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure at runtime (divergence, instability). CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Transition { ZeroToPlus, ZeroToMinus };

// NV ensemble parameters. All rates are angular (rad/s) except gamma_las and
// T1 which are plain rates/times; N spins couple identically.
struct SpinSystem {
    double D = nv_zero_field_splitting;   // zero-field splitting, rad/s
    double gamma_e = gamma_electron;      // rad s^-1 T^-1
    double Gamma2_star = two_pi * 7.0e6;  // inhomogeneous dephasing, rad/s
    double gamma_las = 1.0e5;             // optical pumping rate, 1/s
    double N = 1.0;                       // spin count (integer valued)
    double T1 = 5.0e-3;                   // longitudinal lifetime, s
};

inline void validate(const SpinSystem& s)
{
    if (!(s.D > 0.0)) throw ConfigError("SpinSystem: D must be > 0");
    if (!(s.gamma_e > 0.0)) throw ConfigError("SpinSystem: gamma_e must be > 0");
    if (!(s.Gamma2_star > 0.0)) throw ConfigError("SpinSystem: Gamma2_star must be > 0");
    if (!(s.gamma_las > 0.0)) throw ConfigError("SpinSystem: gamma_las must be > 0");
    if (!(s.T1 > 0.0)) throw ConfigError("SpinSystem: T1 must be > 0");
    if (!(s.N >= 1.0) || s.N != std::floor(s.N))
        throw ConfigError("SpinSystem: N must be an integer >= 1");
    if (!(0.5 * s.gamma_las < s.Gamma2_star))
        throw ConfigError("SpinSystem: requires gamma_las/2 < Gamma2_star");
}

// Static field plus microwave drive. theta_prime is the equilibrium polar
// angle between B and the NV axis.
struct FieldConfig {
    double B = 0.0;            // field magnitude, T
    double theta_prime = 0.0;  // rad, in [0, pi]
    double dBz_dz = 0.0;       // gradient, T/m
    double Omega = 0.0;        // Rabi rate, rad/s
    double omega_mw = 0.0;     // microwave angular frequency, rad/s
};

inline void validate(const FieldConfig& f)
{
    if (!(f.B >= 0.0)) throw ConfigError("FieldConfig: B must be >= 0");
    if (!(f.theta_prime >= 0.0 && f.theta_prime <= pi))
        throw ConfigError("FieldConfig: theta_prime must be in [0, pi]");
    if (!(f.Omega >= 0.0)) throw ConfigError("FieldConfig: Omega must be >= 0");
}

enum class ModeKind { Translational, Librational };

// Generalized harmonic mode: inertia is a mass (kg) for translational modes
// and a moment of inertia (kg m^2) for librational ones.
struct MechanicalMode {
    ModeKind kind = ModeKind::Librational;
    double inertia = 1.0e-23;      // kg or kg m^2
    double omega0 = two_pi * 1e3;  // trap angular frequency, rad/s
    double gamma = 1.0;            // gas damping rate, 1/s
    double T_bath = 300.0;         // K

    double rigidity() const { return inertia * omega0 * omega0; }
};

inline void validate(const MechanicalMode& m)
{
    if (!(m.inertia > 0.0)) throw ConfigError("MechanicalMode: inertia must be > 0");
    if (!(m.omega0 > 0.0)) throw ConfigError("MechanicalMode: omega0 must be > 0");
    if (!(m.gamma >= 0.0)) throw ConfigError("MechanicalMode: gamma must be >= 0");
    if (!(m.T_bath > 0.0)) throw ConfigError("MechanicalMode: T_bath must be > 0");
}

} // namespace spinmech
