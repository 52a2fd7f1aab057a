#include <doctest.h>

#include <string>

#include "spinmech/config.hpp"
#include "spinmech/nv_spin.hpp"
#include "spinmech/sweep.hpp"

using namespace spinmech;

namespace {

const char* kBase = R"(
# example run
[spin]
D_GHz = 2.88
Gamma2_star_MHz = 7
N = 1e9

[field]
B_gauss = 120
theta_prime_deg = 80

[drive]
Omega_MHz = 0.5
mw_detuning_MHz = -3.5
transition = minus

[mode]
kind = librational
density_kg_m3 = 3500
diameter_um = 10
omega0_kHz = 1
pressure_mbar = 0.1
temperature_K = 300
)";

} // namespace

TEST_CASE("config parsing and unit conversion")
{
    const RawConfig raw = parse_ini_text(kBase);
    const RunConfig rc = build_run_config(raw, Subcommand::Backaction);

    CHECK(rc.spin.D == doctest::Approx(two_pi * 2.88e9).epsilon(1e-12));
    CHECK(rc.spin.Gamma2_star == doctest::Approx(two_pi * 7e6).epsilon(1e-12));
    CHECK(rc.spin.N == 1e9);
    CHECK(rc.field.B == doctest::Approx(120e-4).epsilon(1e-12));
    CHECK(rc.field.theta_prime == doctest::Approx(80.0 * deg_to_rad).epsilon(1e-12));
    CHECK(rc.field.Omega == doctest::Approx(two_pi * 0.5e6).epsilon(1e-12));
    CHECK(rc.mode.omega0 == doctest::Approx(two_pi * 1e3).epsilon(1e-12));
    CHECK(rc.mode.inertia == doctest::Approx(1.832596e-23).epsilon(1e-5));
    CHECK(rc.mode.gamma > 0.0);  // derived from pressure
    CHECK(rc.transition == Transition::ZeroToMinus);

    // detuning referenced to the exact transition
    const Eigensystem eig = exact_eigensystem(rc.spin, rc.field);
    CHECK(rc.field.omega_mw - eig.transition(Transition::ZeroToMinus) ==
          doctest::Approx(-two_pi * 3.5e6).epsilon(1e-9));
}

TEST_CASE("unknown keys are rejected in aggregate")
{
    RawConfig raw = parse_ini_text(kBase);
    raw.kv["spin"]["banana"] = "1";
    raw.kv["mode"]["apples"] = "2";
    try {
        build_run_config(raw, Subcommand::Validate);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("banana") != std::string::npos);
        CHECK(msg.find("apples") != std::string::npos);
    }
}

TEST_CASE("missing required keys are aggregated")
{
    const RawConfig raw = parse_ini_text("[mode]\nkind = librational\n");
    try {
        build_run_config(raw, Subcommand::Backaction);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("B_gauss") != std::string::npos);
        CHECK(msg.find("Omega_MHz") != std::string::npos);
        CHECK(msg.find("omega0_kHz") != std::string::npos);
        CHECK(msg.find("inertia_kg_m2") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry line numbers")
{
    CHECK_THROWS_AS(parse_ini_text("[spin\nD_GHz = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_ini_text("D_GHz = 1\n"), ConfigError);  // key outside section
    CHECK_THROWS_AS(parse_ini_text("[spin]\nD_GHz\n"), ConfigError);
    CHECK_THROWS_AS(parse_ini_text("[spin]\nD_GHz = 1\nD_GHz = 2\n"), ConfigError);
    // type errors surface when the run config is built
    CHECK_THROWS_AS(build_run_config(parse_ini_text("[spin]\nD_GHz = abc\n"),
                                     Subcommand::Validate),
                    ConfigError);
}

TEST_CASE("exclusive microwave keys")
{
    RawConfig raw = parse_ini_text(kBase);
    raw.kv["drive"]["mw_freq_GHz"] = "2.75";
    CHECK_THROWS_AS(build_run_config(raw, Subcommand::Backaction), ConfigError);
}

TEST_CASE("pressure route requires geometry")
{
    const char* text = R"(
[field]
B_gauss = 100
[drive]
Omega_MHz = 1
mw_detuning_MHz = 0
[mode]
inertia_kg_m2 = 1e-23
omega0_kHz = 1
pressure_mbar = 0.1
)";
    CHECK_THROWS_AS(build_run_config(parse_ini_text(text), Subcommand::Backaction), ConfigError);
}

TEST_CASE("config hash tracks semantic content only")
{
    const RawConfig a = parse_ini_text(kBase);
    const RawConfig b = parse_ini_text(
        "\n; reordered with comments\n[mode]\nkind = librational\ndensity_kg_m3 = 3500\n"
        "diameter_um = 10\nomega0_kHz = 1\npressure_mbar = 0.1\ntemperature_K = 300\n"
        "[drive]\nOmega_MHz = 0.5\nmw_detuning_MHz = -3.5\ntransition = minus\n"
        "[field]\nB_gauss = 120\ntheta_prime_deg = 80\n"
        "[spin]\nD_GHz = 2.88\nGamma2_star_MHz = 7\nN = 1e9\n");
    CHECK(config_hash(a) == config_hash(b));

    RawConfig c = a;
    c.kv["field"]["B_gauss"] = "121";
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("sweep axes")
{
    RawConfig raw = parse_ini_text(kBase);
    raw.kv["sweep"]["key"] = "field.B_gauss";
    raw.kv["sweep"]["from"] = "0";
    raw.kv["sweep"]["to"] = "500";
    raw.kv["sweep"]["points"] = "11";
    raw.kv["sweep"]["key2"] = "field.theta_prime_deg";
    raw.kv["sweep"]["from2"] = "10";
    raw.kv["sweep"]["to2"] = "80";
    raw.kv["sweep"]["points2"] = "8";

    const SweepGrid grid = make_grid(raw);
    REQUIRE(grid.axes.size() == 2);
    CHECK(grid.size() == 88);
    const auto c0 = grid.coords(0);
    CHECK(c0[0] == 0.0);
    CHECK(c0[1] == 10.0);
    const auto clast = grid.coords(87);
    CHECK(clast[0] == 500.0);
    CHECK(clast[1] == 80.0);
    // inner axis fastest
    const auto c1 = grid.coords(1);
    CHECK(c1[0] == 0.0);
    CHECK(c1[1] == doctest::Approx(20.0));

    const RawConfig at = grid.apply(raw, 87);
    CHECK(build_run_config(at, Subcommand::Coupling).field.B ==
          doctest::Approx(500e-4).epsilon(1e-12));

    SUBCASE("log scale needs positive bounds")
    {
        raw.kv["sweep"]["scale"] = "log";
        CHECK_THROWS_AS(make_grid(raw), ConfigError);
        raw.kv["sweep"]["from"] = "1";
        const SweepGrid lg = make_grid(raw);
        const auto v = axis_values(lg.axes[0]);
        CHECK(v.front() == doctest::Approx(1.0));
        CHECK(v.back() == doctest::Approx(500.0));
        CHECK(v[5] * v[5] == doctest::Approx(v[4] * v[6]).epsilon(1e-12));
    }
    SUBCASE("unknown sweep key")
    {
        raw.kv["sweep"]["key"] = "field.banana";
        CHECK_THROWS_AS(make_grid(raw), ConfigError);
    }
}

TEST_CASE("validate subcommand works on an empty config")
{
    const RunConfig rc = build_run_config(parse_ini_text(""), Subcommand::Validate);
    CHECK(rc.spin.D == doctest::Approx(two_pi * 2.88e9));
    CHECK(rc.field.B == 0.0);
}
