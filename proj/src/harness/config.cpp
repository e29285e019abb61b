#include "tlsgap/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tlsgap/errors.hpp"
#include "tlsgap/rng.hpp"

namespace tlsgap::harness {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
        if (pos != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' as a number for " + key);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' as an integer for " + key);
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "fig3",           "fig4a", "fig4b", "angular_average",
        "bulk_validation", "loss_sweep", "custom"};
    return names;
}

std::vector<std::uint64_t> ExperimentConfig::derived_seeds() const {
    std::vector<std::uint64_t> seeds(n_seeds);
    for (std::size_t i = 0; i < n_seeds; ++i)
        seeds[i] = SplitMix64::derive(master_seed, i);
    return seeds;
}

std::vector<double> ExperimentConfig::fig4_grid() const {
    if (!fig4.t1_min_grid.empty()) return fig4.t1_min_grid;
    std::vector<double> grid(fig4.t1_grid_points);
    const double la = std::log(fig4.t1_grid_min);
    const double lb = std::log(fig4.t1_grid_max);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = (grid.size() == 1)
                             ? 0.0
                             : static_cast<double>(i) / static_cast<double>(grid.size() - 1);
        grid[i] = std::exp(la + f * (lb - la));
    }
    return grid;
}

ExperimentConfig default_config(const std::string& preset) {
    if (std::find(preset_names().begin(), preset_names().end(), preset) ==
        preset_names().end())
        throw ConfigError("unknown preset '" + preset + "'");

    ExperimentConfig c;
    c.preset = preset;
    if (preset == "fig4a") {
        c.ensemble.omega_rabi_max = 45e3;
        c.ensemble.n_tls = 200;
        c.horizon = 1e-4;
    } else if (preset == "fig4b") {
        c.ensemble.omega_rabi_max = 450e3;
        c.ensemble.n_tls = 200;
        c.horizon = 1e-4;
    } else if (preset == "bulk_validation") {
        c.ensemble = bulk_validation_config(0);
        c.n_seeds = 5;
    } else if (preset == "custom") {
        c.horizon = 1e-4;
    }
    return c;
}

void set_field(ExperimentConfig& c, const std::string& key, const std::string& value) {
    // top level
    if (key == "preset") {
        if (std::find(preset_names().begin(), preset_names().end(), value) ==
            preset_names().end())
            throw ConfigError("unknown preset '" + value + "'");
        c.preset = value;
    } else if (key == "horizon") {
        c.horizon = parse_double(key, value);
    } else if (key == "n_seeds") {
        c.n_seeds = parse_u64(key, value);
    } else if (key == "master_seed") {
        c.master_seed = parse_u64(key, value);
    } else if (key == "output_dir") {
        c.output_dir = value;
    } else if (key == "tolerance") {
        c.tolerance = parse_double(key, value);
    } else if (key == "jobs") {
        c.jobs = static_cast<unsigned>(parse_u64(key, value));
    }
    // ensemble
    else if (key == "ensemble.p0") (c.ensemble.p0 = parse_double(key, value));
    else if (key == "ensemble.volume") c.ensemble.volume = parse_double(key, value);
    else if (key == "ensemble.bandwidth") c.ensemble.bandwidth = parse_double(key, value);
    else if (key == "ensemble.delta0_min") c.ensemble.delta0_min = parse_double(key, value);
    else if (key == "ensemble.delta0_max") c.ensemble.delta0_max = parse_double(key, value);
    else if (key == "ensemble.t1_min") c.ensemble.t1_min = parse_double(key, value);
    else if (key == "ensemble.omega_rabi_max") c.ensemble.omega_rabi_max = parse_double(key, value);
    else if (key == "ensemble.n_tls") c.ensemble.n_tls = parse_u64(key, value);
    else if (key == "ensemble.qubit_frequency") c.ensemble.qubit_frequency = parse_double(key, value);
    else if (key == "ensemble.seed") c.ensemble.seed = parse_u64(key, value);
    // gap
    else if (key == "gap.depth") c.gap.depth = parse_double(key, value);
    else if (key == "gap.center") c.gap.center_hz = parse_double(key, value);
    else if (key == "gap.width") c.gap.width_hz = parse_double(key, value);
    else if (key == "gap.s_parallel") c.gap.s_parallel = parse_double(key, value);
    else if (key == "gap.s_perpendicular") c.gap.s_perpendicular = parse_double(key, value);
    // fig3
    else if (key == "fig3.gamma0") c.fig3.gamma0 = parse_double(key, value);
    else if (key == "fig3.depths") c.fig3.depths = parse_list(key, value);
    else if (key == "fig3.width") c.fig3.width_hz = parse_double(key, value);
    else if (key == "fig3.n_out") c.fig3.n_out = parse_u64(key, value);
    // fig4
    else if (key == "fig4.t1_grid_min") c.fig4.t1_grid_min = parse_double(key, value);
    else if (key == "fig4.t1_grid_max") c.fig4.t1_grid_max = parse_double(key, value);
    else if (key == "fig4.t1_grid_points") c.fig4.t1_grid_points = parse_u64(key, value);
    else if (key == "fig4.t1_min_grid") c.fig4.t1_min_grid = parse_list(key, value);
    else if (key == "fig4.n_out") c.fig4.n_out = parse_u64(key, value);
    // angular
    else if (key == "angular.curve") c.angular.curve_path = value;
    else if (key == "angular.weight") {
        if (value != "isotropic" && value != "sine" && value != "both")
            throw ConfigError("angular.weight must be isotropic, sine or both");
        c.angular.weight = value;
    }
    // loss
    else if (key == "loss.tan_delta0") c.loss.tan_delta0 = parse_double(key, value);
    else if (key == "loss.t1_factor") c.loss.t1_factor = parse_double(key, value);
    else if (key == "loss.field_min_over_ec") c.loss.field_min_over_ec = parse_double(key, value);
    else if (key == "loss.field_max_over_ec") c.loss.field_max_over_ec = parse_double(key, value);
    else if (key == "loss.points") c.loss.points = parse_u64(key, value);
    // custom
    else if (key == "custom.gap_mode") {
        if (value != "none" && value != "anisotropic" && value != "isotropic")
            throw ConfigError("custom.gap_mode must be none, anisotropic or isotropic");
        c.custom.gap_mode = value;
    } else if (key == "custom.isotropic_t1_factor") {
        c.custom.isotropic_t1_factor = parse_double(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

void apply_config_file(ExperimentConfig& c, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: empty key or value at line " + std::to_string(lineno));
        set_field(c, section.empty() ? key : section + "." + key, value);
    }
}

void validate(const ExperimentConfig& c) {
    tlsgap::validate(c.ensemble);
    tlsgap::validate(c.gap);
    if (c.horizon < 0) throw ConfigError("config: horizon must be >= 0");
    if (!(c.tolerance > 0 && c.tolerance <= 1e-3))
        throw ConfigError("config: tolerance must be in (0, 1e-3]");
    if (c.n_seeds < 1) throw ConfigError("config: n_seeds must be >= 1");
    if (c.jobs < 1) throw ConfigError("config: jobs must be >= 1");
    if (c.preset == "fig3") {
        if (c.fig3.depths.empty()) throw ConfigError("fig3: depth list is empty");
        for (double d : c.fig3.depths)
            if (d < 0 || d >= 1)
                throw ConfigError("fig3: depths must lie in [0, 1)");
        if (!(c.fig3.gamma0 > 0)) throw ConfigError("fig3: gamma0 must be positive");
    }
    if (c.preset == "fig4a" || c.preset == "fig4b") {
        const auto grid = c.fig4_grid();
        if (grid.empty()) throw ConfigError("fig4: t1_min grid is empty");
        for (double t : grid)
            if (!(t > 0)) throw ConfigError("fig4: t1_min grid values must be positive");
    }
    if (c.preset == "loss_sweep") {
        if (!(c.loss.tan_delta0 > 0)) throw ConfigError("loss: tan_delta0 must be positive");
        if (!(c.loss.t1_factor >= 1)) throw ConfigError("loss: t1_factor must be >= 1");
        if (!(c.loss.field_min_over_ec > 0 &&
              c.loss.field_min_over_ec < c.loss.field_max_over_ec))
            throw ConfigError("loss: field range is invalid");
        if (c.loss.points < 2) throw ConfigError("loss: need at least 2 sweep points");
    }
    if (c.preset == "custom" && c.custom.gap_mode == "isotropic" &&
        !(c.custom.isotropic_t1_factor > 0))
        throw ConfigError("custom: isotropic_t1_factor must be positive");
}

nlohmann::json ExperimentConfig::snapshot() const {
    nlohmann::json j;
    j["preset"] = preset;
    j["horizon"] = horizon;
    j["n_seeds"] = n_seeds;
    j["master_seed"] = master_seed;
    j["output_dir"] = output_dir;
    j["tolerance"] = tolerance;
    j["jobs"] = jobs;
    j["ensemble"] = {{"p0", ensemble.p0},
                     {"volume", ensemble.volume},
                     {"bandwidth", ensemble.bandwidth},
                     {"delta0_min", ensemble.delta0_min},
                     {"delta0_max", ensemble.delta0_max},
                     {"t1_min", ensemble.t1_min},
                     {"omega_rabi_max", ensemble.omega_rabi_max},
                     {"n_tls", ensemble.n_tls},
                     {"qubit_frequency", ensemble.qubit_frequency},
                     {"seed", ensemble.seed}};
    j["gap"] = {{"depth", gap.depth},
                {"center", gap.center_hz},
                {"width", gap.width_hz},
                {"s_parallel", gap.s_parallel},
                {"s_perpendicular", gap.s_perpendicular}};
    j["fig3"] = {{"gamma0", fig3.gamma0},
                 {"depths", fig3.depths},
                 {"width", fig3.width_hz},
                 {"n_out", fig3.n_out}};
    j["fig4"] = {{"t1_grid_min", fig4.t1_grid_min},
                 {"t1_grid_max", fig4.t1_grid_max},
                 {"t1_grid_points", fig4.t1_grid_points},
                 {"t1_min_grid", fig4.t1_min_grid},
                 {"n_out", fig4.n_out}};
    j["angular"] = {{"curve", angular.curve_path}, {"weight", angular.weight}};
    j["loss"] = {{"tan_delta0", loss.tan_delta0},
                 {"t1_factor", loss.t1_factor},
                 {"field_min_over_ec", loss.field_min_over_ec},
                 {"field_max_over_ec", loss.field_max_over_ec},
                 {"points", loss.points}};
    j["custom"] = {{"gap_mode", custom.gap_mode},
                   {"isotropic_t1_factor", custom.isotropic_t1_factor}};
    return j;
}

} // namespace tlsgap::harness
