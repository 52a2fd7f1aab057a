#include "spinmech/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "spinmech/mech.hpp"
#include "spinmech/nv_spin.hpp"

namespace spinmech {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// schema: section -> allowed keys
const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> s = {
        {"spin", {"D_GHz", "gamma_e_GHz_per_T", "Gamma2_star_MHz", "gamma_las_per_s", "N", "T1_ms"}},
        {"field", {"B_gauss", "theta_prime_deg", "dBz_dz_T_per_m"}},
        {"drive",
         {"Omega_MHz", "mw_detuning_MHz", "mw_freq_GHz", "transition", "model", "odmr_contrast",
          "odmr_f_lo_GHz", "odmr_f_hi_GHz", "odmr_points", "odmr_orientations_deg"}},
        {"mode",
         {"kind", "inertia_kg_m2", "mass_kg", "density_kg_m3", "diameter_um", "omega0_kHz",
          "gamma_per_s", "pressure_mbar", "gas_molar_mass_g_per_mol", "shape_factor",
          "temperature_K"}},
        {"sim",
         {"spin_model", "dt_s", "duration_s", "seed", "stride", "init", "theta0_rad",
          "v0_rad_per_s", "psd_segment_pow2", "grid_points", "grid_halfwidth_factor"}},
        {"sweep",
         {"key", "from", "to", "points", "scale", "key2", "from2", "to2", "points2", "scale2"}},
    };
    return s;
}

double parse_double(const std::string& section, const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config: [" + section + "] " + key + ": not a number: '" + v + "'");
    return x;
}

long long parse_int(const std::string& section, const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config: [" + section + "] " + key + ": not an integer: '" + v + "'");
    return x;
}

// Pulls typed values out of a RawConfig while tracking which keys were read.
struct Reader {
    const RawConfig& raw;
    std::vector<std::string> missing;

    bool has(const std::string& sec, const std::string& key) const { return raw.has(sec, key); }

    const std::string* find(const std::string& sec, const std::string& key) const
    {
        const auto s = raw.kv.find(sec);
        if (s == raw.kv.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    double number(const std::string& sec, const std::string& key, double fallback)
    {
        const std::string* v = find(sec, key);
        return v ? parse_double(sec, key, *v) : fallback;
    }

    double required_number(const std::string& sec, const std::string& key)
    {
        const std::string* v = find(sec, key);
        if (!v) {
            missing.push_back("[" + sec + "] " + key);
            return 0.0;
        }
        return parse_double(sec, key, *v);
    }

    long long integer(const std::string& sec, const std::string& key, long long fallback)
    {
        const std::string* v = find(sec, key);
        return v ? parse_int(sec, key, *v) : fallback;
    }

    std::string text(const std::string& sec, const std::string& key, const std::string& fallback)
    {
        const std::string* v = find(sec, key);
        return v ? *v : fallback;
    }
};

std::vector<double> parse_list(const std::string& sec, const std::string& key,
                               const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(sec, key, item));
    }
    return out;
}

} // namespace

bool RawConfig::has(const std::string& section, const std::string& key) const
{
    const auto s = kv.find(section);
    return s != kv.end() && s->second.count(key) > 0;
}

void RawConfig::set(const std::string& section, const std::string& key, double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    kv[section][key] = buf;
}

RawConfig parse_ini_text(const std::string& text)
{
    RawConfig out;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            out.kv[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (out.kv[section].count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        out.kv[section][key] = value;
    }
    return out;
}

RawConfig parse_ini_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_ini_text(buf.str());
}

Subcommand subcommand_from_name(const std::string& name)
{
    if (name == "odmr") return Subcommand::Odmr;
    if (name == "coupling") return Subcommand::Coupling;
    if (name == "equilibria") return Subcommand::Equilibria;
    if (name == "backaction") return Subcommand::Backaction;
    if (name == "sensitivity") return Subcommand::Sensitivity;
    if (name == "simulate") return Subcommand::Simulate;
    if (name == "validate") return Subcommand::Validate;
    throw ConfigError("unknown subcommand '" + name + "'");
}

std::string subcommand_name(Subcommand cmd)
{
    switch (cmd) {
        case Subcommand::Odmr: return "odmr";
        case Subcommand::Coupling: return "coupling";
        case Subcommand::Equilibria: return "equilibria";
        case Subcommand::Backaction: return "backaction";
        case Subcommand::Sensitivity: return "sensitivity";
        case Subcommand::Simulate: return "simulate";
        case Subcommand::Validate: return "validate";
    }
    return "?";
}

RunConfig build_run_config(const RawConfig& raw, Subcommand cmd)
{
    // unknown sections / keys, aggregated
    std::vector<std::string> unknown;
    for (const auto& [sec, keys] : raw.kv) {
        const auto s = schema().find(sec);
        if (s == schema().end()) {
            unknown.push_back("[" + sec + "]");
            continue;
        }
        for (const auto& [key, value] : keys)
            if (!s->second.count(key)) unknown.push_back("[" + sec + "] " + key);
    }
    if (!unknown.empty()) {
        std::string msg = "config: unknown keys:";
        for (const auto& u : unknown) msg += " " + u;
        throw ConfigError(msg);
    }

    Reader rd{raw, {}};
    RunConfig rc;

    // [spin]; absent keys keep the library defaults bit-exactly
    if (rd.has("spin", "D_GHz")) rc.spin.D = hz_to_rad(rd.number("spin", "D_GHz", 0.0) * 1e9);
    if (rd.has("spin", "gamma_e_GHz_per_T"))
        rc.spin.gamma_e = hz_to_rad(rd.number("spin", "gamma_e_GHz_per_T", 0.0) * 1e9);
    rc.spin.Gamma2_star = hz_to_rad(rd.number("spin", "Gamma2_star_MHz", 7.0) * 1e6);
    rc.spin.gamma_las = rd.number("spin", "gamma_las_per_s", 1.0e5);
    rc.spin.N = rd.number("spin", "N", 1.0);
    rc.spin.T1 = rd.number("spin", "T1_ms", 5.0) * 1e-3;

    // [field]
    const bool need_field = cmd == Subcommand::Odmr || cmd == Subcommand::Coupling ||
                            cmd == Subcommand::Equilibria || cmd == Subcommand::Backaction;
    rc.field.B = (need_field ? rd.required_number("field", "B_gauss")
                             : rd.number("field", "B_gauss", 0.0)) *
                 gauss_to_tesla;
    rc.field.theta_prime = rd.number("field", "theta_prime_deg", 0.0) * deg_to_rad;
    rc.field.dBz_dz = rd.number("field", "dBz_dz_T_per_m", 0.0);

    // [drive]
    const std::string tr = rd.text("drive", "transition", "minus");
    if (tr == "plus") rc.transition = Transition::ZeroToPlus;
    else if (tr == "minus") rc.transition = Transition::ZeroToMinus;
    else throw ConfigError("config: [drive] transition must be plus|minus");

    const std::string model = rd.text("drive", "model", "saturated");
    if (model == "dispersive") rc.eq_model = EquilibriumModel::Dispersive;
    else if (model == "saturated") rc.eq_model = EquilibriumModel::LaserSaturated;
    else throw ConfigError("config: [drive] model must be dispersive|saturated");

    const bool need_mw = cmd == Subcommand::Equilibria || cmd == Subcommand::Backaction;
    if (need_mw) rc.field.Omega = hz_to_rad(rd.required_number("drive", "Omega_MHz") * 1e6);
    else rc.field.Omega = hz_to_rad(rd.number("drive", "Omega_MHz", 0.0) * 1e6);

    const bool has_det = rd.has("drive", "mw_detuning_MHz");
    const bool has_freq = rd.has("drive", "mw_freq_GHz");
    if (has_det && has_freq)
        throw ConfigError("config: give only one of [drive] mw_detuning_MHz / mw_freq_GHz");
    if (has_freq) {
        rc.field.omega_mw = hz_to_rad(rd.number("drive", "mw_freq_GHz", 0.0) * 1e9);
        rc.has_mw = true;
    } else if (has_det) {
        // detuning is referenced to the exact transition at theta_prime
        const double det = hz_to_rad(rd.number("drive", "mw_detuning_MHz", 0.0) * 1e6);
        const Eigensystem eig = exact_eigensystem(rc.spin, rc.field);
        rc.field.omega_mw = eig.transition(rc.transition) + det;
        rc.has_mw = true;
    } else if (need_mw) {
        rd.missing.push_back("[drive] mw_detuning_MHz or mw_freq_GHz");
    }

    rc.odmr_contrast = cmd == Subcommand::Odmr ? rd.required_number("drive", "odmr_contrast")
                                               : rd.number("drive", "odmr_contrast", 0.1);
    if (cmd == Subcommand::Odmr) {
        rc.odmr_f_lo = hz_to_rad(rd.required_number("drive", "odmr_f_lo_GHz") * 1e9);
        rc.odmr_f_hi = hz_to_rad(rd.required_number("drive", "odmr_f_hi_GHz") * 1e9);
    }
    rc.odmr_points = static_cast<std::size_t>(rd.integer("drive", "odmr_points", 1001));
    if (rd.has("drive", "odmr_orientations_deg")) {
        for (double deg : parse_list("drive", "odmr_orientations_deg",
                                     *rd.find("drive", "odmr_orientations_deg")))
            rc.odmr_orientations.push_back(deg * deg_to_rad);
    }

    // [mode]
    const std::string kind = rd.text("mode", "kind", "librational");
    if (kind == "librational") rc.mode.kind = ModeKind::Librational;
    else if (kind == "translational") rc.mode.kind = ModeKind::Translational;
    else throw ConfigError("config: [mode] kind must be librational|translational");

    rc.mode.T_bath = rd.number("mode", "temperature_K", 300.0);

    const bool need_mode = cmd == Subcommand::Equilibria || cmd == Subcommand::Backaction ||
                           cmd == Subcommand::Sensitivity || cmd == Subcommand::Simulate;
    const bool has_geometry = rd.has("mode", "density_kg_m3") && rd.has("mode", "diameter_um");
    double sphere_mass = 0.0, sphere_radius = 0.0;
    if (has_geometry) {
        const double rho = rd.number("mode", "density_kg_m3", 0.0);
        const double dia = rd.number("mode", "diameter_um", 0.0) * 1e-6;
        const MassInertia mi = inertia_sphere(rho, dia);
        sphere_mass = mi.mass;
        sphere_radius = 0.5 * dia;
        rc.mode.inertia = rc.mode.kind == ModeKind::Librational ? mi.inertia : mi.mass;
    }
    if (rd.has("mode", "inertia_kg_m2")) rc.mode.inertia = rd.number("mode", "inertia_kg_m2", 0.0);
    else if (rd.has("mode", "mass_kg")) rc.mode.inertia = rd.number("mode", "mass_kg", 0.0);
    else if (!has_geometry && need_mode)
        rd.missing.push_back("[mode] inertia_kg_m2, mass_kg, or density_kg_m3 + diameter_um");

    if (need_mode) rc.mode.omega0 = hz_to_rad(rd.required_number("mode", "omega0_kHz") * 1e3);
    else rc.mode.omega0 = hz_to_rad(rd.number("mode", "omega0_kHz", 1.0) * 1e3);

    const bool need_damping = cmd == Subcommand::Backaction || cmd == Subcommand::Sensitivity ||
                              cmd == Subcommand::Simulate;
    if (rd.has("mode", "gamma_per_s")) {
        rc.mode.gamma = rd.number("mode", "gamma_per_s", 0.0);
    } else if (rd.has("mode", "pressure_mbar")) {
        if (!has_geometry)
            throw ConfigError(
                "config: [mode] pressure_mbar needs density_kg_m3 + diameter_um for the "
                "free-molecular damping formula");
        const double p = rd.number("mode", "pressure_mbar", 0.0) * mbar_to_pascal;
        const double mg = rd.number("mode", "gas_molar_mass_g_per_mol", 28.97) * 1e-3 / avogadro;
        const double shape = rd.number("mode", "shape_factor", 1.0);
        rc.mode.gamma = damping_from_pressure(p, rc.mode.T_bath, mg, sphere_mass, sphere_radius,
                                              shape);
    } else if (need_damping) {
        rd.missing.push_back("[mode] gamma_per_s or pressure_mbar");
    }

    // [sim]
    const std::string sm = rd.text("sim", "spin_model", "off");
    if (sm == "off") rc.spin_model = SpinModel::Off;
    else if (sm == "adiabatic") rc.spin_model = SpinModel::Adiabatic;
    else if (sm == "full-bloch") rc.spin_model = SpinModel::FullBloch;
    else throw ConfigError("config: [sim] spin_model must be off|adiabatic|full-bloch");

    if (cmd == Subcommand::Simulate) {
        rc.dt = rd.required_number("sim", "dt_s");
        rc.duration = rd.required_number("sim", "duration_s");
        if (rc.spin_model != SpinModel::Off) {
            if (!rd.has("field", "B_gauss")) rd.missing.push_back("[field] B_gauss");
            if (!rd.has("drive", "Omega_MHz")) rd.missing.push_back("[drive] Omega_MHz");
            if (!rc.has_mw) rd.missing.push_back("[drive] mw_detuning_MHz or mw_freq_GHz");
            rc.field.Omega = hz_to_rad(rd.number("drive", "Omega_MHz", 0.0) * 1e6);
        }
    }
    rc.seed = static_cast<std::uint64_t>(rd.integer("sim", "seed", 1));
    rc.stride = static_cast<int>(rd.integer("sim", "stride", 1));
    const std::string init = rd.text("sim", "init", "zero");
    if (init == "thermal") rc.thermal_init = true;
    else if (init != "zero") throw ConfigError("config: [sim] init must be zero|thermal");
    rc.theta0 = rd.number("sim", "theta0_rad", 0.0);
    rc.v0 = rd.number("sim", "v0_rad_per_s", 0.0);
    const long long pow2 = rd.integer("sim", "psd_segment_pow2", 0);
    rc.psd_segment_len = pow2 > 0 ? (std::size_t{1} << pow2) : 0;
    rc.grid_points = static_cast<std::size_t>(rd.integer("sim", "grid_points", 2048));
    rc.grid_halfwidth_factor = rd.number("sim", "grid_halfwidth_factor", 10.0);

    if (!rd.missing.empty()) {
        std::string msg = "config: missing required keys for '" + subcommand_name(cmd) + "':";
        for (const auto& k : rd.missing) msg += " " + k + ";";
        throw ConfigError(msg);
    }

    validate(rc.spin);
    validate(rc.field);
    validate(rc.mode);
    return rc;
}

std::vector<SweepAxis> sweep_axes(const RawConfig& raw)
{
    std::vector<SweepAxis> axes;
    const auto sec = raw.kv.find("sweep");
    if (sec == raw.kv.end()) return axes;
    Reader rd{raw, {}};

    const auto parse_axis = [&](const std::string& suffix) {
        if (!rd.has("sweep", "key" + suffix)) return;
        SweepAxis ax;
        const std::string full = rd.text("sweep", "key" + suffix, "");
        const auto dot = full.find('.');
        if (dot == std::string::npos)
            throw ConfigError("config: [sweep] key" + suffix + " must be section.key");
        ax.section = full.substr(0, dot);
        ax.key = full.substr(dot + 1);
        const auto s = schema().find(ax.section);
        if (s == schema().end() || !s->second.count(ax.key))
            throw ConfigError("config: [sweep] unknown key '" + full + "'");
        ax.from = rd.required_number("sweep", "from" + suffix);
        ax.to = rd.required_number("sweep", "to" + suffix);
        ax.points = static_cast<int>(rd.integer("sweep", "points" + suffix, 11));
        const std::string scale = rd.text("sweep", "scale" + suffix, "linear");
        if (scale == "log") ax.log_scale = true;
        else if (scale != "linear")
            throw ConfigError("config: [sweep] scale must be linear|log");
        if (ax.points < 1) throw ConfigError("config: [sweep] points must be >= 1");
        if (ax.log_scale && !(ax.from > 0.0 && ax.to > 0.0))
            throw ConfigError("config: [sweep] log scale needs positive bounds");
        axes.push_back(ax);
    };
    parse_axis("");
    parse_axis("2");
    if (!rd.missing.empty())
        throw ConfigError("config: [sweep] axis incomplete (need from/to)");
    return axes;
}

std::vector<double> axis_values(const SweepAxis& axis)
{
    std::vector<double> v(static_cast<std::size_t>(axis.points));
    for (int i = 0; i < axis.points; ++i) {
        const double t = axis.points == 1 ? 0.0 : static_cast<double>(i) / (axis.points - 1);
        v[static_cast<std::size_t>(i)] =
            axis.log_scale ? axis.from * std::pow(axis.to / axis.from, t)
                           : axis.from + (axis.to - axis.from) * t;
    }
    return v;
}

std::uint64_t config_hash(const RawConfig& raw)
{
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    const auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [sec, keys] : raw.kv) {
        for (const auto& [key, value] : keys) {
            mix(sec);
            mix(".");
            mix(key);
            mix("=");
            mix(value);
            mix("\n");
        }
    }
    return h;
}

} // namespace spinmech
