// Brute-force time-domain integration of the coupled stochastic
// spin-mechanics system, plus trajectory analysis (PSD, ring-down fits,
// effective temperature). This is the oracle the closed-form modules are
// validated against.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "spinmech/spin_dynamics.hpp"
#include "spinmech/types.hpp"

namespace spinmech {

enum class SpinModel { Off, Adiabatic, FullBloch };

// Reduced two-level drive seen by the oscillator. Delta is the detuning at
// theta = 0; Delta(theta) = Delta - G theta.
struct SimDrive {
    double Delta = 0.0;        // rad/s
    double G = 0.0;            // rad/s per rad
    double Omega = 0.0;        // rad/s
    double Gamma2_star = 0.0;  // rad/s
    double gamma_las = 0.0;    // 1/s
    double N = 1.0;            // spin count
};

// Drive parameters from the NV eigenstructure: detuning of field.omega_mw
// against the exact transition at field.theta_prime, analytic coupling.
SimDrive make_drive(const SpinSystem& spin, const FieldConfig& field, Transition t);

struct SimConfig {
    MechanicalMode mode;
    SimDrive drive;
    SpinModel spin_model = SpinModel::Off;
    double dt = 0.0;        // s
    double duration = 0.0;  // s
    std::uint64_t seed = 1;
    std::uint32_t stream = 0;  // ensemble member id; independent noise per stream
    int stride = 1;            // record every stride-th step
    double theta0 = 0.0;       // rad
    double v0 = 0.0;           // rad/s
    bool thermal_init = false;     // draw (theta, v) from the bath-T Gaussian
    bool spin_steady_init = true;  // start the spin at steady state of Delta(theta0)
    TwoLevelState spin0{};         // initial spin state when !spin_steady_init
    bool record_coherence = false;
};

// Throws ConfigError when dt or duration violate the resolution bounds
// (dt <= 0.05 of every relevant timescale for the chosen spin model).
void validate(const SimConfig& cfg);

struct Trajectory {
    double dt_sample = 0.0;  // dt * stride
    std::vector<double> theta;     // rad
    std::vector<double> velocity;  // rad/s
    std::vector<double> rho11;
    std::vector<std::complex<double>> rho10;  // filled only when recorded
    bool aborted = false;
    std::string abort_reason;
};

// Mechanical block advanced by the exact Gaussian transition of the linear
// Langevin system (phase-space Ornstein-Uhlenbeck step: matrix exponential
// plus the exact noise covariance), so the spin-off baseline carries zero
// discretization bias in its thermal statistics at any dt. The spin torque
// enters as Strang velocity half-kicks around that step; the spin block uses
// exponential integrator substeps in a palindromic composition.
// Deterministic for fixed (seed, stream, dt).
Trajectory simulate(const SimConfig& cfg);

// --- Analysis -------------------------------------------------------------

struct PsdEstimate {
    std::vector<double> omega;  // rad/s, k = 0 .. L/2
    std::vector<double> S;      // double-sided level, <x^2> = integral S dw/2pi
    double variance = 0.0;      // mean per-segment variance of the input
    std::size_t segments = 0;
};

// Hann-windowed averaged periodogram (per-segment mean removal, 50% overlap
// by default). segment_len must be a power of two; needs >= 8 segments.
PsdEstimate welch_psd(const std::vector<double>& x, double dt_sample,
                      std::size_t segment_len, double overlap = 0.5);

// Integral S dw/2pi over the full double-sided axis (symmetry assumed).
double psd_integral(const PsdEstimate& est);

// Least-squares Lorentzian |chi|^2 fit S = A / ((w0^2 - w^2)^2 + (gamma w)^2)
// in log space over the supplied band.
struct LorentzianFit {
    double omega0;
    double gamma;
    double amplitude;
};
LorentzianFit fit_lorentzian(const std::vector<double>& omega, const std::vector<double>& S);

// Effective mode temperature I w_fit^2 <theta^2> / k from a stationary
// segment. When omega_fit == 0 the frequency is fitted from a Welch PSD.
// nonstationary flags a variance drift above 3 sigma between halves.
struct TemperatureEstimate {
    double T_eff;
    double omega_fit;
    bool nonstationary;
};
TemperatureEstimate equipartition_temperature(const Trajectory& traj,
                                              const MechanicalMode& mode,
                                              double omega_fit = 0.0);

// Ring-down (omega, gamma) from the analytic-signal envelope: quadrature
// demodulation at the estimated frequency, log-envelope linear regression
// (amplitude ~ exp(-gamma t / 2)), frequency refined from the phase slope.
struct RingdownFit {
    double omega;
    double gamma;
};
RingdownFit ringdown_fit(const Trajectory& traj);

} // namespace spinmech
