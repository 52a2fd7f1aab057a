// Reduced two-level spin evolution and static equilibria of the coupled
// spin-mechanical system.
#pragma once

#include <complex>
#include <vector>

#include "spinmech/types.hpp"

namespace spinmech {

// Reduced density-matrix state of the driven {|0'>, |1'>} pair.
struct TwoLevelState {
    double rho11 = 0.0;                  // excited population
    std::complex<double> rho10{0.0, 0.0};  // coherence
};

// Rates entering the optical Bloch equations. Delta is the microwave
// detuning at the current angle, Delta(theta) = Delta - G*theta.
struct BlochParams {
    double Delta = 0.0;        // rad/s
    double Omega = 0.0;        // rad/s
    double Gamma2_star = 0.0;  // rad/s
    double gamma_las = 0.0;    // 1/s
};

// Right-hand sides
//   d rho10/dt = (-Gamma2* + i Delta) rho10 + i (Omega/2)(2 rho11 - 1)
//   d rho11/dt = -gamma_las rho11 + i (Omega/2)(rho10 - rho10*)
TwoLevelState bloch_rhs(const TwoLevelState& s, const BlochParams& p);

// Lorentzian line factor L = 1 / (1 + (Delta/Gamma2*)^2).
double lorentzian_factor(double Delta, double Gamma2_star);

// Incoherent pumping rate Gamma0 = Omega^2 Gamma2* / (Gamma2*^2 + Delta^2).
double pumping_rate(double Omega, double Gamma2_star, double Delta);

// Steady-state excited population rho11 = Gamma0 / (2 (gamma_las + Gamma0)).
double steady_population(double Delta_bar, double Omega, double Gamma2_star,
                         double gamma_las);

// Spin observables at a working point, used by the back-action formulas.
struct DriveState {
    double Delta_bar;  // detuning at the equilibrium angle, rad/s
    double Gamma0;     // pumping rate, 1/s
    double L;          // Lorentzian factor, dimensionless
    double tau;        // spin response time (gamma_las + Gamma0)^-1, s
};
DriveState drive_state(double Delta_bar, double Omega, double Gamma2_star, double gamma_las);

// Adiabatic population equation (coherence eliminated, valid Gamma2* >> omega0):
//   d rho11/dt = -gamma_las rho11 - (Omega^2 / 2 Gamma2*) L(theta) (2 rho11 - 1)
struct AdiabaticParams {
    double Delta = 0.0;        // detuning at theta = 0, rad/s
    double G = 0.0;            // coupling, rad/s per rad (or per m)
    double Omega = 0.0;
    double Gamma2_star = 0.0;
    double gamma_las = 0.0;
};
double adiabatic_rhs(double rho11, double theta, const AdiabaticParams& p);

// Static equilibria of trap torque + spin torque. The spin torque follows
// the convention tau_s = -hbar N G rho11 throughout; the dispersive model
// uses the dressed-state population (Omega/Delta(theta))^2, the saturated
// model the full laser-driven steady state.
enum class EquilibriumModel { Dispersive, LaserSaturated };

struct Equilibrium {
    double theta;    // rad (or m for CoM)
    bool stable;     // positive total stiffness
    double rho11;    // model population at the root
};

struct EquilibriumSet {
    std::vector<Equilibrium> roots;  // ascending in theta
    bool marginal = false;           // near-degenerate double root
    bool bistable = false;           // two stable roots
};

// Raw-parameter form. hbar_N_G = hbar * N * G carries the torque scale;
// rigidity = inertia * omega0^2.
struct EquilibriaInputs {
    double Delta;        // detuning at theta = 0, rad/s
    double G;            // rad/s per rad
    double Omega;        // rad/s
    double Gamma2_star;  // rad/s (saturated model only)
    double gamma_las;    // 1/s   (saturated model only)
    double N;            // spin count
    double rigidity;     // N m / rad
};
EquilibriumSet equilibria(const EquilibriaInputs& in, EquilibriumModel model);

// Convenience form: detuning from field.omega_mw against the exact transition
// frequency at field.theta_prime, coupling from the analytic constants.
EquilibriumSet equilibria(const SpinSystem& spin, const FieldConfig& field,
                          const MechanicalMode& mode, Transition t, EquilibriumModel model);

// Model spin torque at angle theta (used by the equilibria brute-force oracle
// and stability classification): -hbar N G rho11_model(theta).
double model_spin_torque(const EquilibriaInputs& in, EquilibriumModel model, double theta);

} // namespace spinmech
