#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "spinmech/nv_spin.hpp"
#include "spinmech/rng.hpp"
#include "spinmech/sym3.hpp"

using namespace spinmech;

namespace {

const SpinSystem kSpin;  // D = 2pi*2.88 GHz, gamma_e = 1.76086e11

FieldConfig field_at(double B, double theta)
{
    FieldConfig f;
    f.B = B;
    f.theta_prime = theta;
    return f;
}

double B_of(double gB_hz) { return two_pi * gB_hz / kSpin.gamma_e; }

// Independent oracle for the exact transitions: Jacobi diagonalization of the
// same Hamiltonian, labels matched to the library output by eigenvalue.
std::array<double, 3> jacobi_frequencies(double B, double theta)
{
    const double gB = kSpin.gamma_e * B;
    const double c = gB * std::cos(theta);
    const double s = -gB * std::sin(theta) / std::sqrt(2.0);
    oracles::Mat3 h = {{{kSpin.D + c, s, 0.0}, {s, 0.0, s}, {0.0, s, kSpin.D - c}}};
    oracles::Vec3 vals;
    oracles::Mat3 vecs;
    oracles::jacobi3(h, vals, vecs);
    return vals;
}

} // namespace

TEST_CASE("exact eigensystem: aligned field is the bare Zeeman ladder")
{
    const double B = B_of(0.140e9);
    const Eigensystem eig = exact_eigensystem(kSpin, field_at(B, 0.0));
    CHECK(eig.transition(Transition::ZeroToPlus) ==
          doctest::Approx(two_pi * 3.020e9).epsilon(1e-12));
    CHECK(eig.transition(Transition::ZeroToMinus) ==
          doctest::Approx(two_pi * 2.740e9).epsilon(1e-12));
    // states are the basis states
    CHECK(std::abs(eig.state[0][0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eig.state[1][1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eig.state[2][2]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact eigensystem: zero field degeneracy")
{
    const Eigensystem eig = exact_eigensystem(kSpin, field_at(0.0, 0.3));
    CHECK(eig.frequency[0] == doctest::Approx(kSpin.D).epsilon(1e-13));
    CHECK(std::fabs(eig.frequency[1]) <= 1e-6 * kSpin.D);
    CHECK(eig.frequency[2] == doctest::Approx(kSpin.D).epsilon(1e-13));
    CHECK(eig.transition(Transition::ZeroToPlus) == doctest::Approx(kSpin.D).epsilon(1e-12));
    CHECK(eig.transition(Transition::ZeroToMinus) == doctest::Approx(kSpin.D).epsilon(1e-12));
}

TEST_CASE("exact eigensystem: orthonormality on a (B, theta) grid")
{
    double worst = 0.0;
    for (int ib = 0; ib <= 12; ++ib) {
        for (int it = 0; it <= 12; ++it) {
            const double B = 600.0 * 1e-4 * ib / 12.0;
            const double th = pi * it / 12.0 * 0.999;
            const Eigensystem e = exact_eigensystem(kSpin, field_at(B, th));
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) {
                    std::complex<double> d = p == q ? -1.0 : 0.0;
                    for (int i = 0; i < 3; ++i) d += std::conj(e.state[p][i]) * e.state[q][i];
                    worst = std::fmax(worst, std::abs(d));
                }
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("exact eigensystem agrees with the Jacobi oracle at 74 degrees")
{
    // two ESR branches vs B at fixed angle: upper rising, lower falling
    const double theta = 74.0 * deg_to_rad;
    double prev_up = kSpin.D, prev_dn = kSpin.D;
    for (int i = 0; i <= 50; ++i) {
        const double B = 100.0 * 1e-4 * i / 50.0;
        const Eigensystem e = exact_eigensystem(kSpin, field_at(B, theta));
        const auto jac = jacobi_frequencies(B, theta);
        // the three labeled frequencies are the three Jacobi eigenvalues
        for (double f : {e.frequency[0], e.frequency[1], e.frequency[2]}) {
            const double err = std::min({std::fabs(f - jac[0]), std::fabs(f - jac[1]),
                                         std::fabs(f - jac[2])});
            CHECK(err <= 1e-10 * kSpin.D);
        }
        const double up = e.transition(Transition::ZeroToPlus);
        const double dn = e.transition(Transition::ZeroToMinus);
        if (i > 0) {
            CHECK(up > prev_up);
            CHECK(dn < prev_dn);
        }
        prev_up = up;
        prev_dn = dn;
    }
}

TEST_CASE("exact eigensystem: labeling ambiguity raises exactly at pi/2")
{
    // the +-1 branches hybridize into symmetric/antisymmetric combinations
    // with equal basis overlaps but distinct energies: no adiabatic label
    CHECK_THROWS_AS(exact_eigensystem(kSpin, field_at(50e-4, pi / 2.0)), NumericalError);
    // a vanishing field keeps the pair degenerate: harmless, labels resolve
    const Eigensystem e = exact_eigensystem(kSpin, field_at(1e-9, pi / 2.0));
    CHECK(e.transition(Transition::ZeroToPlus) == doctest::Approx(kSpin.D).epsilon(1e-9));
}

TEST_CASE("analytic frequencies: aligned reduction and pi/2 ground shift")
{
    const double B = B_of(0.140e9);
    const double gB = kSpin.gamma_e * B;

    const AnalyticFrequencies a0 = analytic_frequencies(kSpin, field_at(B, 0.0));
    CHECK(a0.omega_plus == doctest::Approx(kSpin.D + gB).epsilon(1e-14));
    CHECK(a0.omega_zero == 0.0);
    CHECK(a0.omega_minus == doctest::Approx(kSpin.D - gB).epsilon(1e-14));

    const AnalyticFrequencies a90 = analytic_frequencies(kSpin, field_at(B, pi / 2.0));
    CHECK(a90.omega_zero == doctest::Approx(-gB * gB / kSpin.D).epsilon(1e-13));
}

TEST_CASE("analytic frequencies at 30 degrees: frozen direct evaluation")
{
    // oracle: direct evaluation of the second-order formulas, frozen
    const AnalyticFrequencies a =
        analytic_frequencies(kSpin, field_at(B_of(0.140e9), 30.0 * deg_to_rad));
    CHECK(a.omega_plus == doctest::Approx(two_pi * 3.002094251e9).epsilon(1e-9));
    CHECK(a.omega_zero == doctest::Approx(-two_pi * 1.701388889e6).epsilon(1e-9));
    CHECK(a.omega_minus == doctest::Approx(two_pi * 2.759607138e9).epsilon(1e-9));
    // sanity band against the rounded reference values
    CHECK(std::fabs(a.omega_plus - two_pi * 3.00206e9) < two_pi * 5e4);
    CHECK(std::fabs(a.omega_zero + two_pi * 1.70e6) < two_pi * 5e3);
    CHECK(std::fabs(a.omega_minus - two_pi * 2.75966e9) < two_pi * 1e5);
}

TEST_CASE("perturbation consistency bound on the validity grid")
{
    // third-order remainder bound, checked on a 50x50 grid up to gB = 0.05 D
    const double Bmax = 0.05 * kSpin.D / kSpin.gamma_e;
    for (int ib = 0; ib < 50; ++ib) {
        for (int it = 0; it < 50; ++it) {
            const double B = Bmax * ib / 49.0;
            const double th = 60.0 * deg_to_rad * it / 49.0;
            const Eigensystem ex = exact_eigensystem(kSpin, field_at(B, th));
            const AnalyticFrequencies an = analytic_frequencies(kSpin, field_at(B, th));
            const double gB = kSpin.gamma_e * B;
            const double bound = 4.0 * gB * gB * gB / (kSpin.D * kSpin.D) + 1e-4;
            CHECK(std::fabs(ex.transition(Transition::ZeroToPlus) -
                            an.transition(Transition::ZeroToPlus)) <= bound);
            CHECK(std::fabs(ex.transition(Transition::ZeroToMinus) -
                            an.transition(Transition::ZeroToMinus)) <= bound);
        }
    }
}

TEST_CASE("frequencies are even and betas odd in theta'")
{
    for (int i = 1; i <= 8; ++i) {
        const double th = 0.17 * i;
        const double B = B_of(0.120e9);
        const AnalyticFrequencies fp = analytic_frequencies(kSpin, field_at(B, th));
        const AnalyticFrequencies fm = analytic_frequencies(kSpin, field_at(B, -th));
        CHECK(fp.omega_plus == doctest::Approx(fm.omega_plus).epsilon(1e-14));
        CHECK(fp.omega_zero == doctest::Approx(fm.omega_zero).epsilon(1e-14));
        CHECK(fp.omega_minus == doctest::Approx(fm.omega_minus).epsilon(1e-14));

        const CouplingConstants cp = coupling_constants(kSpin, field_at(B, th));
        const CouplingConstants cm = coupling_constants(kSpin, field_at(B, -th));
        CHECK(cp.beta_plus == doctest::Approx(-cm.beta_plus).epsilon(1e-13));
        CHECK(cp.beta_zero == doctest::Approx(-cm.beta_zero).epsilon(1e-13));
        CHECK(cp.beta_minus == doctest::Approx(-cm.beta_minus).epsilon(1e-13));
    }
}

TEST_CASE("coupling constants: aligned zeros, pi/2 value, and definitions")
{
    const double B = 500.0 * 1e-4;
    const double gB = kSpin.gamma_e * B;

    const CouplingConstants c0 = coupling_constants(kSpin, field_at(B, 0.0));
    CHECK(c0.beta_plus == 0.0);
    CHECK(c0.beta_zero == 0.0);
    CHECK(c0.beta_minus == 0.0);
    CHECK(c0.G_theta_plus == 0.0);
    CHECK(c0.G_theta_minus == 0.0);

    const CouplingConstants c90 = coupling_constants(kSpin, field_at(B, pi / 2.0));
    CHECK(c90.beta_minus == doctest::Approx(gB).epsilon(1e-13));

    FieldConfig f = field_at(B, 0.7);
    f.dBz_dz = 3.0e4;
    const CouplingConstants cc = coupling_constants(kSpin, f);
    CHECK(cc.G_theta_plus == doctest::Approx(cc.beta_plus - cc.beta_zero).epsilon(1e-15));
    CHECK(cc.G_theta_minus == doctest::Approx(cc.beta_minus - cc.beta_zero).epsilon(1e-15));
    CHECK(cc.G_z == doctest::Approx(kSpin.gamma_e * 3.0e4).epsilon(1e-15));
}

TEST_CASE("betas equal centered finite differences of the analytic frequencies")
{
    constexpr double h = 1e-6;
    for (double th : {10.0, 30.0, 45.0, 60.0, 80.0}) {
        const double B = B_of(140e6);
        const double t = th * deg_to_rad;
        const CouplingConstants cc = coupling_constants(kSpin, field_at(B, t));
        const AnalyticFrequencies up = analytic_frequencies(kSpin, field_at(B, t + h));
        const AnalyticFrequencies dn = analytic_frequencies(kSpin, field_at(B, t - h));

        const double fd_plus = (up.omega_plus - dn.omega_plus) / (2.0 * h);
        const double fd_zero = (up.omega_zero - dn.omega_zero) / (2.0 * h);
        const double fd_minus = (up.omega_minus - dn.omega_minus) / (2.0 * h);
        CHECK(cc.beta_plus == doctest::Approx(fd_plus).epsilon(1e-6));
        CHECK(cc.beta_zero == doctest::Approx(fd_zero).epsilon(1e-6));
        CHECK(cc.beta_minus == doctest::Approx(fd_minus).epsilon(1e-6));
    }
}

TEST_CASE("G_theta bound on the validity domain")
{
    for (int ib = 1; ib <= 20; ++ib) {
        for (int it = 0; it <= 20; ++it) {
            const double B = 0.3 * kSpin.D / kSpin.gamma_e * ib / 20.0;
            const double th = pi / 2.0 * it / 20.0;
            const double gB = kSpin.gamma_e * B;
            const CouplingConstants cc = coupling_constants(kSpin, field_at(B, th));
            const double bound = gB * (1.0 + 3.0 * gB / kSpin.D) * (1.0 + 1e-12);
            CHECK(std::fabs(cc.G_theta_plus) <= bound);
            CHECK(std::fabs(cc.G_theta_minus) <= bound);
        }
    }
}

TEST_CASE("optimal coupling tracks gamma_e B at low field and departs at high field")
{
    const double gB50 = two_pi * 50e6;
    const OptimalCoupling oc50 = optimal_coupling(kSpin, gB50 / kSpin.gamma_e,
                                                  Transition::ZeroToMinus);
    CHECK(std::fabs(std::fabs(oc50.G_analytic) - gB50) / gB50 < 0.05);
    CHECK(std::fabs(std::fabs(oc50.G_exact) - gB50) / gB50 < 0.05);
    const double dev50 =
        std::fabs(oc50.G_analytic - oc50.G_exact) / std::fabs(oc50.G_exact);

    const double gB300 = two_pi * 300e6;
    const OptimalCoupling oc300 = optimal_coupling(kSpin, gB300 / kSpin.gamma_e,
                                                   Transition::ZeroToMinus);
    const double dev300 =
        std::fabs(oc300.G_analytic - oc300.G_exact) / std::fabs(oc300.G_exact);
    CHECK(dev300 > 2.0 * dev50);
    CHECK(dev300 > 0.015);

    // G_opt -> 0 with the field
    const OptimalCoupling tiny = optimal_coupling(kSpin, 1e-7, Transition::ZeroToMinus);
    CHECK(std::fabs(tiny.G_analytic) <= 1.2 * kSpin.gamma_e * 1e-7);

    CHECK_THROWS_AS(optimal_coupling(kSpin, 0.0, Transition::ZeroToMinus), ConfigError);
}

namespace {

std::vector<std::size_t> dip_indices(const OdmrSpectrum& spec, double floor_level)
{
    std::vector<std::size_t> dips;
    for (std::size_t i = 1; i + 1 < spec.pl.size(); ++i)
        if (spec.pl[i] < spec.pl[i - 1] && spec.pl[i] <= spec.pl[i + 1] &&
            spec.pl[i] < floor_level)
            dips.push_back(i);
    return dips;
}

} // namespace

TEST_CASE("odmr spectrum dips")
{
    SUBCASE("zero field: single dip at D")
    {
        const FrequencySpan span{two_pi * 2.82e9, two_pi * 2.94e9, 4001};
        const OdmrSpectrum s = odmr_spectrum(kSpin, field_at(0.0, 0.0), 0.2, span);
        const auto dips = dip_indices(s, 0.95);
        REQUIRE(dips.size() == 1);
        CHECK(std::fabs(s.omega[dips[0]] - kSpin.D) < two_pi * 1e6);
        // both lines coincide: double depth
        CHECK(s.pl[dips[0]] == doctest::Approx(0.6).epsilon(1e-3));
    }
    SUBCASE("74 degrees, 30 G: dips at the exact transitions")
    {
        const FieldConfig f = field_at(30.0 * 1e-4, 74.0 * deg_to_rad);
        const Eigensystem eig = exact_eigensystem(kSpin, f);
        const FrequencySpan span{two_pi * 2.80e9, two_pi * 2.96e9, 8001};
        const OdmrSpectrum s = odmr_spectrum(kSpin, f, 0.15, span);
        const auto dips = dip_indices(s, 0.95);
        REQUIRE(dips.size() == 2);
        // overlapping Lorentzian tails pull the minima together by ~Gamma^4/sep^3
        const double tol = two_pi * 100e3;
        CHECK(std::fabs(s.omega[dips[0]] - eig.transition(Transition::ZeroToMinus)) < tol);
        CHECK(std::fabs(s.omega[dips[1]] - eig.transition(Transition::ZeroToPlus)) < tol);
    }
    SUBCASE("zero contrast: flat unity")
    {
        const FrequencySpan span{two_pi * 2.8e9, two_pi * 2.96e9, 101};
        const OdmrSpectrum s = odmr_spectrum(kSpin, field_at(30e-4, 0.4), 0.0, span);
        for (double v : s.pl) CHECK(v == 1.0);
    }
    SUBCASE("ensemble: four orientations give eight dips")
    {
        const FieldConfig f = field_at(50.0 * 1e-4, 0.0);
        const std::vector<double> angles = {10.0 * deg_to_rad, 35.0 * deg_to_rad,
                                            60.0 * deg_to_rad, 80.0 * deg_to_rad};
        const FrequencySpan span{two_pi * 2.70e9, two_pi * 3.06e9, 20001};
        const OdmrSpectrum s = odmr_spectrum_ensemble(kSpin, f, 0.2, span, angles);
        CHECK(dip_indices(s, 0.999).size() == 8);
    }
    SUBCASE("errors")
    {
        const FrequencySpan empty{two_pi * 2.9e9, two_pi * 2.8e9, 100};
        CHECK_THROWS_AS(odmr_spectrum(kSpin, field_at(0, 0), 0.2, empty), ConfigError);
        const FrequencySpan ok{two_pi * 2.8e9, two_pi * 2.9e9, 100};
        CHECK_THROWS_AS(odmr_spectrum(kSpin, field_at(0, 0), 0.5, ok), ConfigError);
    }
}

TEST_CASE("validity report evaluates the model inequalities")
{
    MechanicalMode mode;
    mode.inertia = 1.832596e-23;  // 10 um diamond sphere
    mode.omega0 = two_pi * 1e3;
    mode.T_bath = 300.0;

    SUBCASE("50 G aligned: all pass")
    {
        const auto checks = validity_report(kSpin, field_at(50e-4, 0.0), mode);
        for (const auto& c : checks) CHECK(c.pass);
        CHECK(checks[0].name == "gamma_e*B << D");
        CHECK(1.0 / checks[0].ratio == doctest::Approx(0.048654).epsilon(1e-4));
        CHECK(checks[2].ratio == doctest::Approx(2.6125e12).epsilon(1e-3));
    }
    SUBCASE("Omega equal to gamma_e B fails the drive inequality")
    {
        FieldConfig f = field_at(50e-4, 0.0);
        f.Omega = kSpin.gamma_e * f.B;
        const auto checks = validity_report(kSpin, f, mode);
        bool found = false;
        for (const auto& c : checks)
            if (c.name == "Omega << gamma_e*B") {
                found = true;
                CHECK_FALSE(c.pass);
                CHECK(c.ratio == doctest::Approx(1.0));
            }
        CHECK(found);
    }
    SUBCASE("threshold factor is configurable")
    {
        FieldConfig f = field_at(50e-4, 0.0);
        const auto strict = validity_report(kSpin, f, mode, 30.0);
        CHECK_FALSE(strict[0].pass);  // D/(gamma_e B) = 20.6 < 30
    }
}
