// Config-file parsing for the CLI: INI-style sections with unit-suffixed keys.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spinmech/backaction.hpp"
#include "spinmech/sim.hpp"
#include "spinmech/types.hpp"

namespace spinmech {

// Raw parsed file: section -> key -> value string. Unknown keys are rejected
// when a RunConfig is built; sweeps override raw values before the build.
struct RawConfig {
    std::map<std::string, std::map<std::string, std::string>> kv;

    bool has(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, double value);
};

// Parses INI text ('#' or ';' comments). Throws ConfigError with line numbers.
RawConfig parse_ini_text(const std::string& text);
RawConfig parse_ini_file(const std::string& path);

enum class Subcommand { Odmr, Coupling, Equilibria, Backaction, Sensitivity, Simulate, Validate };

Subcommand subcommand_from_name(const std::string& name);
std::string subcommand_name(Subcommand cmd);

struct SweepAxis {
    std::string section;
    std::string key;
    double from = 0.0;
    double to = 0.0;
    int points = 1;
    bool log_scale = false;
};

// Fully derived run parameters for one grid point.
struct RunConfig {
    SpinSystem spin;
    FieldConfig field;
    MechanicalMode mode;
    Transition transition = Transition::ZeroToMinus;
    EquilibriumModel eq_model = EquilibriumModel::LaserSaturated;

    SpinModel spin_model = SpinModel::Off;
    double dt = 0.0;
    double duration = 0.0;
    std::uint64_t seed = 1;
    int stride = 1;
    bool thermal_init = false;
    double theta0 = 0.0;
    double v0 = 0.0;
    std::size_t psd_segment_len = 0;  // 0: auto

    double odmr_contrast = 0.0;
    double odmr_f_lo = 0.0;  // rad/s
    double odmr_f_hi = 0.0;
    std::size_t odmr_points = 1001;
    std::vector<double> odmr_orientations;  // rad; empty = single orientation

    std::size_t grid_points = 2048;     // backaction response grids
    double grid_halfwidth_factor = 10;  // +- factor * gamma around omega0

    bool has_mw = false;  // microwave drive keys were given
};

// Validates keys against the schema, aggregates unknown and missing keys into
// single ConfigError messages, converts units, applies cross-key derivations
// (detuning -> omega_mw, pressure -> gamma, density/diameter -> inertia).
RunConfig build_run_config(const RawConfig& raw, Subcommand cmd);

// Sweep axes ([sweep] key/from/to/points/scale and key2/...), empty if none.
std::vector<SweepAxis> sweep_axes(const RawConfig& raw);

// Values along one axis.
std::vector<double> axis_values(const SweepAxis& axis);

// FNV-1a over the canonical "section.key=value" list: changes iff a semantic
// key changes (whitespace, comments and ordering do not contribute).
std::uint64_t config_hash(const RawConfig& raw);

} // namespace spinmech
