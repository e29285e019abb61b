#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlsgap/gap_response.hpp"
#include "tlsgap/tls_ensemble.hpp"

namespace tlsgap::harness {

struct Fig3Settings {
    double gamma0 = 1e6;       // 1/s; intrinsic T1 = 1 us
    std::vector<double> depths = {0.0, 0.6, 0.9, 0.99};
    double width_hz = 0.5e9;   // half-width; 1 GHz full bandgap
    std::size_t n_out = 2001;
};

struct Fig4Settings {
    double t1_grid_min = 1e-10; // 0.1 ns
    double t1_grid_max = 1e-4;  // 100 us
    std::size_t t1_grid_points = 25;
    std::vector<double> t1_min_grid; // explicit override of the log grid
    std::size_t n_out = 501;
};

struct AngularSettings {
    std::string curve_path = "data/fig2c_suppression.csv";
    std::string weight = "both"; // isotropic | sine | both
};

struct LossSettings {
    double tan_delta0 = 2e-3;
    double t1_factor = 9.0;
    double field_min_over_ec = 1e-2;
    double field_max_over_ec = 1e4;
    std::size_t points = 121;
};

struct CustomSettings {
    std::string gap_mode = "none"; // none | anisotropic | isotropic
    double isotropic_t1_factor = 1.0;
};

struct ExperimentConfig {
    std::string preset = "fig3";
    EnsembleConfig ensemble;
    GapSpec gap;
    double horizon = 0.0; // 0 = preset default
    std::size_t n_seeds = 20;
    std::uint64_t master_seed = 20260808;
    std::string output_dir = "out";
    double tolerance = 1e-8;
    unsigned jobs = 1;

    Fig3Settings fig3;
    Fig4Settings fig4;
    AngularSettings angular;
    LossSettings loss;
    CustomSettings custom;

    std::vector<std::uint64_t> derived_seeds() const;
    std::vector<double> fig4_grid() const;
    nlohmann::json snapshot() const;
};

const std::vector<std::string>& preset_names();

// Preset defaults (ensemble parameters, horizons, seed counts) as an
// ExperimentConfig ready to run or to be overridden.
ExperimentConfig default_config(const std::string& preset);

// Assigns one field addressed by its dotted name ("ensemble.p0",
// "gap.depth", "fig4.t1_min_grid", ...). Values are parsed by field type;
// lists are comma separated. Throws ConfigError for unknown keys or
// malformed values. Shared by the config-file reader and sweep axes.
void set_field(ExperimentConfig& config, const std::string& key,
               const std::string& value);

// Key/value text file with [section] headers; '#' or ';' start comments.
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

// Validates cross-field invariants before any computation.
void validate(const ExperimentConfig& config);

} // namespace tlsgap::harness
