#include "spinmech/nv_spin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinmech/math.hpp"
#include "spinmech/sym3.hpp"

namespace spinmech {

namespace {

// Hamiltonian matrix /hbar in the {|+1>, |0>, |-1>} basis, NV frame:
//   H = D Sz^2 + gB (cos(t) Sz - sin(t) Sx)
// with Sx off-diagonals 1/sqrt(2). Real symmetric.
Mat3 hamiltonian(double D, double gB, double theta)
{
    const double c = gB * std::cos(theta);
    const double s = -gB * std::sin(theta) / std::sqrt(2.0);
    return Mat3{{{D + c, s, 0.0}, {s, 0.0, s}, {0.0, s, D - c}}};
}

constexpr int n_perms = 6;
constexpr int perms[n_perms][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

} // namespace

Eigensystem exact_eigensystem(const SpinSystem& spin, const FieldConfig& field)
{
    if (!(field.B >= 0.0)) throw ConfigError("exact_eigensystem: B must be >= 0");

    const double gB = spin.gamma_e * field.B;
    const Sym3Eigen eig = sym3_eigensystem(hamiltonian(spin.D, gB, field.theta_prime));

    // Adiabatic labeling: match each eigenvector to the aligned-field basis
    // state {|+1>, |0>, |-1>} it overlaps most. perm[label] = eigen index.
    double score[n_perms];
    for (int p = 0; p < n_perms; ++p) {
        double s = 0.0;
        for (int label = 0; label < 3; ++label) {
            const double ov = eig.vector[perms[p][label]][label];
            s += ov * ov;
        }
        score[p] = s;
    }
    int best = 0;
    for (int p = 1; p < n_perms; ++p)
        if (score[p] > score[best]) best = p;

    // Tie handling: an equal-score competitor is harmless when it assigns the
    // same frequency to every label (degenerate subspace; keep energy order
    // omega_{+1'} >= omega_{-1'}). If the tied assignments differ in energy
    // content the adiabatic labels are genuinely undefined.
    constexpr double tie_tol = 1e-9;
    double scale = 0.0;
    for (double v : eig.value) scale = std::max(scale, std::fabs(v));
    const auto split = [&](int p) { return eig.value[perms[p][0]] - eig.value[perms[p][2]]; };
    for (int p = 0; p < n_perms; ++p) {
        if (p == best || score[best] - score[p] > tie_tol) continue;
        bool same_spectrum = true;
        for (int label = 0; label < 3; ++label)
            if (std::fabs(eig.value[perms[p][label]] - eig.value[perms[best][label]]) >
                tie_tol * scale)
                same_spectrum = false;
        if (same_spectrum) {
            if (split(p) > split(best)) best = p;
        } else {
            throw NumericalError(
                "exact_eigensystem: adiabatic state labeling is ambiguous "
                "(overlaps indistinguishable within 1e-9)");
        }
    }

    Eigensystem out;
    for (int label = 0; label < 3; ++label) {
        const int j = perms[best][label];
        out.frequency[label] = eig.value[j];
        for (int i = 0; i < 3; ++i) out.state[label][i] = eig.vector[j][i];
    }
    return out;
}

AnalyticFrequencies analytic_frequencies(const SpinSystem& spin, const FieldConfig& field)
{
    const double gB = spin.gamma_e * field.B;
    const double c = std::cos(field.theta_prime);
    const double s2 = std::sin(field.theta_prime) * std::sin(field.theta_prime);
    const double vv = gB * gB / spin.D;  // second-order scale
    return {spin.D + gB * c + 0.5 * vv * s2, -vv * s2, spin.D - gB * c + 0.5 * vv * s2};
}

CouplingConstants coupling_constants(const SpinSystem& spin, const FieldConfig& field)
{
    const double gB = spin.gamma_e * field.B;
    const double s = std::sin(field.theta_prime);
    const double c = std::cos(field.theta_prime);
    const double vv = gB * gB / spin.D;

    CouplingConstants out;
    out.beta_plus = -gB * s + vv * s * c;
    out.beta_zero = -vv * std::sin(2.0 * field.theta_prime);
    out.beta_minus = gB * s + vv * s * c;
    out.G_theta_plus = out.beta_plus - out.beta_zero;
    out.G_theta_minus = out.beta_minus - out.beta_zero;
    out.G_z = spin.gamma_e * field.dBz_dz;
    return out;
}

OptimalCoupling optimal_coupling(const SpinSystem& spin, double B, Transition t)
{
    if (!(B > 0.0)) throw ConfigError("optimal_coupling: B must be > 0");

    FieldConfig f;
    f.B = B;

    const auto analytic_G = [&](double theta) {
        f.theta_prime = theta;
        return coupling_constants(spin, f).G_theta(t);
    };
    // Central difference of the exact transition frequency
    constexpr double h = 1e-6;
    const auto exact_G = [&](double theta) {
        f.theta_prime = theta + h;
        const double up = exact_eigensystem(spin, f).transition(t);
        f.theta_prime = theta - h;
        const double dn = exact_eigensystem(spin, f).transition(t);
        return (up - dn) / (2.0 * h);
    };

    // Open interval: stay clear of theta' = pi/2, where the +-1 branches
    // hybridize and the labeled transition is not differentiable.
    constexpr double lo = 1e-6;
    const double hi = pi / 2.0 - 1e-4;
    OptimalCoupling out;
    out.theta_analytic =
        maximize_scalar([&](double th) { return std::fabs(analytic_G(th)); }, lo, hi);
    out.G_analytic = analytic_G(out.theta_analytic);
    out.theta_exact =
        maximize_scalar([&](double th) { return std::fabs(exact_G(th)); }, lo, hi);
    out.G_exact = exact_G(out.theta_exact);
    return out;
}

namespace {

OdmrSpectrum odmr_impl(const SpinSystem& spin, const FieldConfig& field, double contrast,
                       const FrequencySpan& span, const std::vector<double>& angles)
{
    if (!(contrast >= 0.0 && contrast <= 0.3))
        throw ConfigError("odmr_spectrum: contrast must be in [0, 0.3]");
    if (!(span.omega_hi > span.omega_lo) || span.points == 0)
        throw ConfigError("odmr_spectrum: empty frequency span");
    if (angles.empty()) throw ConfigError("odmr_spectrum: no orientations given");

    std::vector<double> lines;
    lines.reserve(2 * angles.size());
    FieldConfig fa = field;
    for (double th : angles) {
        fa.theta_prime = th;
        const Eigensystem eig = exact_eigensystem(spin, fa);
        lines.push_back(eig.transition(Transition::ZeroToPlus));
        lines.push_back(eig.transition(Transition::ZeroToMinus));
    }
    const double depth = contrast / static_cast<double>(angles.size());
    const double hw = spin.Gamma2_star;  // HWHM in angular frequency

    OdmrSpectrum out;
    out.omega.resize(span.points);
    out.pl.resize(span.points);
    for (std::size_t i = 0; i < span.points; ++i) {
        const double w = span.points == 1
                             ? span.omega_lo
                             : span.omega_lo + (span.omega_hi - span.omega_lo) * i /
                                                   (span.points - 1);
        double dip = 0.0;
        for (double wl : lines) {
            const double d = w - wl;
            dip += depth * hw * hw / (hw * hw + d * d);
        }
        out.omega[i] = w;
        out.pl[i] = 1.0 - dip;
    }
    return out;
}

} // namespace

OdmrSpectrum odmr_spectrum(const SpinSystem& spin, const FieldConfig& field, double contrast,
                           const FrequencySpan& span)
{
    return odmr_impl(spin, field, contrast, span, {field.theta_prime});
}

OdmrSpectrum odmr_spectrum_ensemble(const SpinSystem& spin, const FieldConfig& field,
                                    double contrast, const FrequencySpan& span,
                                    const std::vector<double>& orientation_angles)
{
    return odmr_impl(spin, field, contrast, span, orientation_angles);
}

std::vector<ValidityCheck> validity_report(const SpinSystem& spin, const FieldConfig& field,
                                           const MechanicalMode& mode, double factor)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const auto ratio_of = [](double big, double small) {
        return small == 0.0 ? inf : big / small;
    };

    const double gB = spin.gamma_e * field.B;
    const double s2 = std::sin(field.theta_prime) * std::sin(field.theta_prime);
    const double c = std::cos(field.theta_prime);
    const double kT = k_boltzmann * mode.T_bath;

    std::vector<ValidityCheck> checks;
    const auto add = [&](std::string name, double ratio) {
        checks.push_back({std::move(name), ratio, factor, ratio >= factor});
    };

    add("gamma_e*B << D", ratio_of(spin.D, gB));
    add("sin^2(theta') << cos(theta')", c <= 0.0 ? 0.0 : ratio_of(c, s2));
    add("sqrt(kT*I) >> hbar*N",
        ratio_of(std::sqrt(kT * mode.inertia), hbar * spin.N));
    add("Omega << gamma_e*B", ratio_of(gB, field.Omega));
    add("gamma_las/2 << Gamma2_star", ratio_of(spin.Gamma2_star, 0.5 * spin.gamma_las));
    add("kT >> hbar*omega0", ratio_of(kT, hbar * mode.omega0));
    add("gamma_las*T1 >> 1", spin.gamma_las * spin.T1);
    return checks;
}

} // namespace spinmech
