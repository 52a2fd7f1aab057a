// Closed-form dynamical back-action of the driven spin on the mechanical
// mode: spin rigidity, spring shift, damping, susceptibility, PSD, T_f.
#pragma once

#include <complex>
#include <vector>

#include "spinmech/spin_dynamics.hpp"
#include "spinmech/types.hpp"

namespace spinmech {

// Working-point parameters for the reduced two-level + oscillator system.
struct BackactionInputs {
    double N = 1.0;            // spin count
    double G = 0.0;            // coupling, rad/s per rad (or per m for CoM)
    double Delta_bar = 0.0;    // detuning at the equilibrium angle, rad/s
    double Omega = 0.0;        // rad/s
    double Gamma2_star = 0.0;  // rad/s
    double gamma_las = 0.0;    // 1/s
};

// Drive-to-population response rate alpha = G sqrt(gamma_las Gamma0^2 / (Gamma2* Omega^2)).
double alpha_rate(const BackactionInputs& in);

// Spin response time tau = 1 / (gamma_las + Gamma0).
double spin_response_time(const BackactionInputs& in);

// Dispersive (coherent, laser-free) limit, Omega << |Delta_bar|:
// static torque tau_s0 = -hbar N G (Omega/Delta_bar)^2 and rigidity
// K_s = -2 hbar N G^2 Omega^2 / Delta_bar^3. Throws on Delta_bar = 0.
struct DispersiveRigidity {
    double tau_s0;  // N m
    double K_s;     // N m / rad
};
DispersiveRigidity dispersive_rigidity(const BackactionInputs& in);

// Retarded spin rigidity in the adiabatic limit (Gamma2* >> omega):
//   K_s(omega) = -hbar N Delta_bar (alpha tau)^2 / (1 - i omega tau)
// in the exp(-i omega t) convention of the susceptibility below. Re K_s
// shifts the spring, Im K_s (> 0 for Delta_bar < 0) damps the motion.
std::complex<double> adiabatic_rigidity(const BackactionInputs& in, double omega);

// Mode renormalization evaluated at the bare omega0:
//   omega_tilde = omega0 [1 - Re K_s / (2 K_t)]
//   gamma_tilde = gamma  [1 + Q Im K_s / K_t]
// `unstable` flags gamma_tilde <= 0 (anti-damping instability).
struct ModifiedMode {
    double omega_tilde;  // rad/s
    double gamma_tilde;  // 1/s
    bool unstable;
};
ModifiedMode modified_mode(const MechanicalMode& mode, std::complex<double> Ks_at_omega0);

// Explicit adiabatic forms of the same renormalization:
//   omega_tilde = omega0 [1 + hbar N (alpha tau)^2 Delta_bar / (2 K_t (1 + (omega0 tau)^2))]
//   gamma_tilde = gamma  [1 - Q hbar N (alpha tau)^2 (omega0 tau) Delta_bar / (K_t (1 + (omega0 tau)^2))]
// Identical to modified_mode(mode, adiabatic_rigidity(in, omega0)).
ModifiedMode modified_mode_adiabatic(const MechanicalMode& mode, const BackactionInputs& in);

// Self-consistent variant: K_s re-evaluated at omega_tilde until converged.
// Off by default; the closed-form analysis uses the bare omega0.
ModifiedMode modified_mode_self_consistent(const MechanicalMode& mode,
                                           const BackactionInputs& in,
                                           int max_iter = 50, double rel_tol = 1e-12);

// Effective susceptibility chi(omega) = 1 / (I (omega0^2 - omega^2 - i omega gamma) - K_s).
std::complex<double> susceptibility(const MechanicalMode& mode, std::complex<double> Ks,
                                    double omega);

// Displacement PSD S(omega) = |chi|^2 S_T with S_T = 2 k T I gamma, double-sided
// in angular frequency: <theta^2> = integral S d omega / (2 pi).
double psd_value(const MechanicalMode& mode, std::complex<double> Ks, double omega);

// Grids over strictly positive frequencies; computed in frequency chunks in
// parallel, output order fixed by the grid.
std::vector<std::complex<double>> susceptibility_grid(const MechanicalMode& mode,
                                                      const BackactionInputs& in,
                                                      const std::vector<double>& omega);
std::vector<double> psd_grid(const MechanicalMode& mode, const BackactionInputs& in,
                             const std::vector<double>& omega);

// T_f = (gamma / gamma_tilde) T. Throws NumericalError when gamma_tilde <= 0.
double final_temperature(const MechanicalMode& mode, double gamma_tilde);

// One-stop summary at the working point.
struct BackactionResult {
    std::complex<double> Ks_at_omega0;
    double omega_tilde;
    double gamma_tilde;
    double T_f;         // K; NaN when unstable
    double alpha;       // 1/s per rad
    double tau;         // s
    bool unstable;
};
BackactionResult analyze_backaction(const MechanicalMode& mode, const BackactionInputs& in);

} // namespace spinmech
