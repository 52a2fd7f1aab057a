// Static spin torques/forces and thermomechanical detection limits.
#pragma once

#include "spinmech/types.hpp"

namespace spinmech {

// Minimum detectable torque per root bandwidth, sqrt(4 kT gamma I), N m/sqrt(Hz).
// Both algebraic forms sqrt(4kT gamma I) and sqrt(4kT K_t/(Q omega0)) are
// evaluated and cross-checked. Requires gamma > 0.
double min_torque(const MechanicalMode& mode);

// Force analog for a translational mode, N/sqrt(Hz).
double min_force(const MechanicalMode& mode);

enum class SpinStateLabel { PlusPrime, ZeroPrime, MinusPrime };

// Static torque -hbar N beta_state exerted when the given dressed state is
// populated, N m. The ZeroPrime case is the ground-state torque from
// field-induced state mixing (nonzero for 0 < theta' < pi/2).
double static_spin_torque(const SpinSystem& spin, const FieldConfig& field,
                          SpinStateLabel state);

// Static force -hbar N gamma_e dBz/dz on the CoM in an aligned field, N.
double static_spin_force(const SpinSystem& spin, double dBz_dz);

// Largest usable field gradient before gradient broadening defeats pulsed
// microwave excitation: delta_nu / (gamma_e[Hz/T] * d), in T/m. delta_nu is
// an ordinary frequency (Hz); gamma_e is converted from rad/s/T internally.
double max_gradient(const SpinSystem& spin, double delta_nu_hz, double ensemble_diameter);

// Averaging time to resolve `target` (N m or N): 4 kT gamma I / target^2, s.
double integration_time(const MechanicalMode& mode, double target);

} // namespace spinmech
