#include "spinmech/sensing.hpp"

#include <cmath>

#include "spinmech/nv_spin.hpp"

namespace spinmech {

namespace {

double min_signal(const MechanicalMode& mode)
{
    if (!(mode.gamma > 0.0)) throw ConfigError("min signal: gamma must be > 0");
    const double kT = k_boltzmann * mode.T_bath;
    const double form1 = std::sqrt(4.0 * kT * mode.gamma * mode.inertia);
    const double q = mode.omega0 / mode.gamma;
    const double form2 = std::sqrt(4.0 * kT * mode.rigidity() / (q * mode.omega0));
    if (std::fabs(form1 - form2) > 1e-9 * form1)
        throw NumericalError("min signal: algebraic forms disagree");
    return form1;
}

} // namespace

double min_torque(const MechanicalMode& mode) { return min_signal(mode); }

double min_force(const MechanicalMode& mode) { return min_signal(mode); }

double static_spin_torque(const SpinSystem& spin, const FieldConfig& field,
                          SpinStateLabel state)
{
    const CouplingConstants cc = coupling_constants(spin, field);
    double beta = 0.0;
    switch (state) {
        case SpinStateLabel::PlusPrime: beta = cc.beta_plus; break;
        case SpinStateLabel::ZeroPrime: beta = cc.beta_zero; break;
        case SpinStateLabel::MinusPrime: beta = cc.beta_minus; break;
    }
    return -hbar * spin.N * beta;
}

double static_spin_force(const SpinSystem& spin, double dBz_dz)
{
    return -hbar * spin.N * spin.gamma_e * dBz_dz;
}

double max_gradient(const SpinSystem& spin, double delta_nu_hz, double ensemble_diameter)
{
    if (!(delta_nu_hz >= 0.0) || !(ensemble_diameter > 0.0))
        throw ConfigError("max_gradient: delta_nu must be >= 0, diameter > 0");
    const double gamma_e_hz = spin.gamma_e / two_pi;  // Hz/T for this bound
    return delta_nu_hz / (gamma_e_hz * ensemble_diameter);
}

double integration_time(const MechanicalMode& mode, double target)
{
    if (!(target > 0.0)) throw ConfigError("integration_time: target must be > 0");
    const double s = min_signal(mode);
    return (s / target) * (s / target);
}

} // namespace spinmech
