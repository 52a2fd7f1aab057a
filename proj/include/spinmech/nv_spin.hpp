// NV ground-state spin eigenstructure vs field angle and the spin-mechanical
// coupling constants derived from it.
#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "spinmech/types.hpp"

namespace spinmech {

using Vec3c = std::array<std::complex<double>, 3>;

// Eigenstructure of H/hbar = D Sz'^2 + gamma_e B (cos(theta') Sz' - sin(theta') Sx')
// in the NV frame. Entries are ordered by adiabatic label {+1', 0', -1'}
// (maximal overlap with the aligned-field eigenstates), not by magnitude.
struct Eigensystem {
    std::array<double, 3> frequency{};  // rad/s: omega_{+1'}, omega_{0'}, omega_{-1'}
    std::array<Vec3c, 3> state{};       // components in the {|+1>, |0>, |-1>} basis

    // ESR transition frequency from |0'> to |+1'> or |-1'>
    double transition(Transition t) const
    {
        return (t == Transition::ZeroToPlus ? frequency[0] : frequency[2]) - frequency[1];
    }
};

// Exact diagonalization of the 3x3 Hamiltonian with adiabatic state labeling.
// Throws NumericalError if the overlap-based labeling is ambiguous.
Eigensystem exact_eigensystem(const SpinSystem& spin, const FieldConfig& field);

// Second-order perturbative frequencies (valid for gamma_e*B << D):
//   omega_{+1} = D + gB cos(t') + (gB)^2/D sin^2(t')/2
//   omega_0    = -(gB)^2/D sin^2(t')
//   omega_{-1} = D - gB cos(t') + (gB)^2/D sin^2(t')/2
struct AnalyticFrequencies {
    double omega_plus;
    double omega_zero;
    double omega_minus;
    double transition(Transition t) const
    {
        return (t == Transition::ZeroToPlus ? omega_plus : omega_minus) - omega_zero;
    }
};

AnalyticFrequencies analytic_frequencies(const SpinSystem& spin, const FieldConfig& field);

// Angular derivatives beta_i = d omega_i / d theta' and the per-transition
// coupling constants G_theta = beta_i - beta_0, plus G_z for the CoM mode.
struct CouplingConstants {
    double beta_plus;     // rad/s per rad
    double beta_zero;
    double beta_minus;
    double G_theta_plus;  // beta_plus - beta_zero
    double G_theta_minus; // beta_minus - beta_zero
    double G_z;           // gamma_e * dBz/dz, rad/s per m

    double G_theta(Transition t) const
    {
        return t == Transition::ZeroToPlus ? G_theta_plus : G_theta_minus;
    }
};

CouplingConstants coupling_constants(const SpinSystem& spin, const FieldConfig& field);

// Angle maximizing |G_theta| over theta' in (0, pi/2], from the analytic
// formula and from finite differences of the exact transition frequencies.
struct OptimalCoupling {
    double theta_analytic;
    double G_analytic;   // signed value at the analytic optimum
    double theta_exact;
    double G_exact;
};

OptimalCoupling optimal_coupling(const SpinSystem& spin, double B, Transition t);

// Normalized photoluminescence with Lorentzian dips (half-width Gamma2_star)
// at the exact ESR transition frequencies.
struct OdmrSpectrum {
    std::vector<double> omega;  // rad/s
    std::vector<double> pl;     // normalized to 1 away from resonance
};

struct FrequencySpan {
    double omega_lo = 0.0;  // rad/s
    double omega_hi = 0.0;
    std::size_t points = 0;
};

OdmrSpectrum odmr_spectrum(const SpinSystem& spin, const FieldConfig& field,
                           double contrast, const FrequencySpan& span);

// Ensemble variant: one pair of dips per supplied orientation angle (rad),
// each orientation weighted by 1/n_orientations so the total dip depth at
// overlap stays bounded by the single-line contrast.
OdmrSpectrum odmr_spectrum_ensemble(const SpinSystem& spin, const FieldConfig& field,
                                    double contrast, const FrequencySpan& span,
                                    const std::vector<double>& orientation_angles);

// Named inequality checks behind the reduced-model assumptions. "a << b"
// passes when b/a >= factor (default 10).
struct ValidityCheck {
    std::string name;
    double ratio;      // evaluated b/a; may be +inf
    double threshold;  // required factor
    bool pass;
};

std::vector<ValidityCheck> validity_report(const SpinSystem& spin, const FieldConfig& field,
                                           const MechanicalMode& mode, double factor = 10.0);

} // namespace spinmech
