#include "spinmech/mech.hpp"

#include <cmath>

namespace spinmech {

double thermal_std(const MechanicalMode& mode)
{
    return std::sqrt(k_boltzmann * mode.T_bath / mode.rigidity());
}

double bath_force_psd(const MechanicalMode& mode)
{
    return 2.0 * mode.inertia * mode.gamma * k_boltzmann * mode.T_bath;
}

StabilityResult stability_check(const MechanicalMode& mode)
{
    if (mode.kind != ModeKind::Librational)
        throw ConfigError("stability_check: criterion applies to librational modes only");
    const double bound = 10.0 * k_boltzmann * mode.T_bath;
    const double ratio = mode.rigidity() / bound;
    // boundary inclusive, with rounding slack so K_t = 10 kT passes exactly
    return {ratio >= 1.0 - 1e-12, ratio};
}

MassInertia inertia_sphere(double density, double diameter)
{
    if (!(density > 0.0 && diameter > 0.0))
        throw ConfigError("inertia_sphere: dimensions must be > 0");
    const double m = density * pi * diameter * diameter * diameter / 6.0;
    return {m, 0.1 * m * diameter * diameter};  // (2/5) m (d/2)^2
}

EllipsoidInertia inertia_ellipsoid(double density, double a, double b, double c)
{
    if (!(density > 0.0 && a > 0.0 && b > 0.0 && c > 0.0))
        throw ConfigError("inertia_ellipsoid: dimensions must be > 0");
    const double m = density * 4.0 / 3.0 * pi * a * b * c;
    return {m, 0.2 * m * (b * b + c * c), 0.2 * m * (a * a + c * c),
            0.2 * m * (a * a + b * b)};
}

double damping_from_pressure(double pressure, double temperature, double gas_molecule_mass,
                             double particle_mass, double particle_radius, double shape_factor)
{
    if (!(pressure > 0.0)) throw ConfigError("damping_from_pressure: pressure must be > 0");
    if (!(temperature > 0.0 && gas_molecule_mass > 0.0 && particle_mass > 0.0 &&
          particle_radius > 0.0 && shape_factor > 0.0))
        throw ConfigError("damping_from_pressure: inputs must be > 0");

    const double kT = k_boltzmann * temperature;
    const double vbar = std::sqrt(8.0 * kT / (pi * gas_molecule_mass));
    const double prefactor = 4.0 * pi / 3.0 * (1.0 + pi / 8.0);
    return shape_factor * prefactor * particle_radius * particle_radius * pressure * vbar *
           gas_molecule_mass / (kT * particle_mass);
}

} // namespace spinmech
