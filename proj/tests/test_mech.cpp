#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spinmech/backaction.hpp"
#include "spinmech/mech.hpp"

using namespace spinmech;

TEST_CASE("thermal std")
{
    SUBCASE("rigidity at ten kT gives 1/sqrt(10) rad")
    {
        MechanicalMode m;
        m.T_bath = 300.0;
        m.omega0 = two_pi * 1e3;
        m.inertia = 10.0 * k_boltzmann * m.T_bath / (m.omega0 * m.omega0);
        CHECK(thermal_std(m) == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-12));
    }
    SUBCASE("10 um diamond sphere in a kHz trap")
    {
        const MassInertia mi = inertia_sphere(3500.0, 10e-6);
        MechanicalMode m;
        m.inertia = mi.inertia;
        m.omega0 = two_pi * 1e3;
        m.T_bath = 300.0;
        CHECK(thermal_std(m) == doctest::Approx(2.392705e-3).epsilon(1e-6));
        CHECK(thermal_std(m) > 1e-3);  // mrad scale
        CHECK(thermal_std(m) < 1e-2);
    }
    SUBCASE("vanishing temperature")
    {
        MechanicalMode m;
        m.T_bath = 1e-18;
        CHECK(thermal_std(m) < 1e-6);
    }
}

TEST_CASE("stability check")
{
    MechanicalMode m;
    m.T_bath = 300.0;
    m.omega0 = two_pi * 1e3;

    SUBCASE("boundary inclusive at exactly 10 kT")
    {
        m.inertia = 10.0 * k_boltzmann * m.T_bath / (m.omega0 * m.omega0);
        const StabilityResult r = stability_check(m);
        CHECK(r.pass);
        CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("kHz trap needs I of order 1e-27")
    {
        const double I_req = 10.0 * k_boltzmann * 300.0 / (m.omega0 * m.omega0);
        CHECK(I_req == doctest::Approx(1.049167e-27).epsilon(1e-6));
        m.inertia = 1.05e-27;
        CHECK(stability_check(m).pass);
        m.inertia = 1.0e-27;
        CHECK_FALSE(stability_check(m).pass);
    }
    SUBCASE("MHz optical trap needs I of order 1e-33")
    {
        m.omega0 = two_pi * 1e6;
        const double I_req = 10.0 * k_boltzmann * 300.0 / (m.omega0 * m.omega0);
        CHECK(I_req == doctest::Approx(1.049167e-33).epsilon(1e-6));
    }
    SUBCASE("translational mode rejected")
    {
        m.kind = ModeKind::Translational;
        CHECK_THROWS_AS(stability_check(m), ConfigError);
    }
}

TEST_CASE("rigid-body inertia helpers")
{
    SUBCASE("100 nm diamond sphere")
    {
        const MassInertia mi = inertia_sphere(3500.0, 100e-9);
        CHECK(mi.mass == doctest::Approx(1.832596e-18).epsilon(1e-6));
        CHECK(mi.inertia == doctest::Approx(1.832596e-33).epsilon(1e-6));
    }
    SUBCASE("inertia scales as the fifth power of diameter")
    {
        const MassInertia a = inertia_sphere(3500.0, 1e-6);
        const MassInertia b = inertia_sphere(3500.0, 2e-6);
        CHECK(b.inertia / a.inertia == doctest::Approx(32.0).epsilon(1e-12));
    }
    SUBCASE("degenerate ellipsoid equals the sphere")
    {
        const MassInertia s = inertia_sphere(2200.0, 2e-6);
        const EllipsoidInertia e = inertia_ellipsoid(2200.0, 1e-6, 1e-6, 1e-6);
        CHECK(e.mass == doctest::Approx(s.mass).epsilon(1e-12));
        CHECK(e.I_a == doctest::Approx(s.inertia).epsilon(1e-12));
        CHECK(e.I_b == doctest::Approx(s.inertia).epsilon(1e-12));
        CHECK(e.I_c == doctest::Approx(s.inertia).epsilon(1e-12));
    }
    SUBCASE("invalid dimensions")
    {
        CHECK_THROWS_AS(inertia_sphere(0.0, 1e-6), ConfigError);
        CHECK_THROWS_AS(inertia_ellipsoid(1000.0, 1e-6, -1e-6, 1e-6), ConfigError);
    }
}

TEST_CASE("free-molecular damping")
{
    const MassInertia mi = inertia_sphere(3500.0, 15e-6);
    const double T = 300.0;

    SUBCASE("linear in pressure")
    {
        const double g1 = damping_from_pressure(10.0, T, air_molecule_mass, mi.mass, 7.5e-6);
        const double g2 = damping_from_pressure(20.0, T, air_molecule_mass, mi.mass, 7.5e-6);
        CHECK(g2 == doctest::Approx(2.0 * g1).epsilon(1e-12));
        const double g0 = damping_from_pressure(1e-9, T, air_molecule_mass, mi.mass, 7.5e-6);
        CHECK(g0 < 1e-9);
    }
    SUBCASE("15 um diamond at 0.1 mbar, 300 K, air (frozen regression)")
    {
        const double g = damping_from_pressure(0.1 * mbar_to_pascal, T, air_molecule_mass,
                                               mi.mass, 7.5e-6);
        CHECK(g == doctest::Approx(2.885323855).epsilon(1e-8));
    }
    SUBCASE("shape factor scales the rate")
    {
        const double g1 = damping_from_pressure(10.0, T, air_molecule_mass, mi.mass, 7.5e-6);
        const double g2 =
            damping_from_pressure(10.0, T, air_molecule_mass, mi.mass, 7.5e-6, 1.7);
        CHECK(g2 == doctest::Approx(1.7 * g1).epsilon(1e-12));
    }
    SUBCASE("invalid pressure")
    {
        CHECK_THROWS_AS(damping_from_pressure(0.0, T, air_molecule_mass, mi.mass, 7.5e-6),
                        ConfigError);
        CHECK_THROWS_AS(damping_from_pressure(-1.0, T, air_molecule_mass, mi.mass, 7.5e-6),
                        ConfigError);
    }
}

TEST_CASE("bath PSD level and Lorentzian area closure")
{
    MechanicalMode m;
    m.inertia = 1.832596e-23;
    m.omega0 = two_pi * 1e3;
    m.gamma = m.omega0 / 10.0;
    m.T_bath = 300.0;

    CHECK(bath_force_psd(m) ==
          doctest::Approx(2.0 * m.inertia * m.gamma * k_boltzmann * 300.0).epsilon(1e-14));

    // integral of the bare displacement PSD over omega/2pi equals kT/K_t
    const auto S = [&](double w) { return psd_value(m, {0.0, 0.0}, w); };
    const double target = k_boltzmann * m.T_bath / m.rigidity();
    const double upper = 100.0 * m.omega0;
    const double integral =
        2.0 * oracles::adaptive_simpson(S, 0.0, upper, 1e-9 * target * two_pi) / two_pi;
    CHECK(integral == doctest::Approx(target).epsilon(1e-6));
}
