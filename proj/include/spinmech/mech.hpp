// Thermal-bath statistics, rigid-body inertia helpers and trap stability
// checks for harmonic mechanical modes.
#pragma once

#include "spinmech/types.hpp"

namespace spinmech {

// Equipartition standard deviation sqrt(kT / (inertia * omega0^2)), in m or rad.
double thermal_std(const MechanicalMode& mode);

// Double-sided white Langevin drive level 2 * inertia * gamma * kT
// (N^2 s for translation, (N m)^2 s for libration).
double bath_force_psd(const MechanicalMode& mode);

// Angular-confinement criterion K_t >= 10 kT (boundary inclusive).
// Only meaningful for librational modes; throws otherwise.
struct StabilityResult {
    bool pass;
    double ratio;  // K_t / (10 kT)
};
StabilityResult stability_check(const MechanicalMode& mode);

struct MassInertia {
    double mass;     // kg
    double inertia;  // kg m^2
};

// Solid sphere of the given diameter.
MassInertia inertia_sphere(double density, double diameter);

// Solid ellipsoid with semi-axes a, b, c; principal moments about each axis.
struct EllipsoidInertia {
    double mass;
    double I_a, I_b, I_c;  // about the a, b, c axes respectively
};
EllipsoidInertia inertia_ellipsoid(double density, double a, double b, double c);

// Free-molecular gas damping rate for a sphere, Epstein (1924) drag with
// diffuse reflection and full accommodation:
//   gamma = shape_factor * (4 pi / 3)(1 + pi/8) r^2 p vbar m_gas / (kT m)
// with vbar = sqrt(8 kT / (pi m_gas)). Linear in pressure; valid when the
// mean free path is large compared to the particle (free-molecular regime).
// Non-spherical particles enter through the shape correction factor.
double damping_from_pressure(double pressure, double temperature, double gas_molecule_mass,
                             double particle_mass, double particle_radius,
                             double shape_factor = 1.0);

} // namespace spinmech
