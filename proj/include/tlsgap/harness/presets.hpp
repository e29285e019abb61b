#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tlsgap/harness/config.hpp"
#include "tlsgap/harness/manifest.hpp"

namespace tlsgap::harness {

// Executes the preset pipeline (sample -> build -> propagate/solve -> fit ->
// export) and writes its data files plus manifest.json under
// config.output_dir. Configuration errors surface before any computation;
// per-seed solver failures are recorded in the manifest without aborting the
// other seeds.
RunManifest run_preset(const ExperimentConfig& config);

struct SweepAxis {
    std::string key;                 // dotted config field, e.g. "gap.depth"
    std::vector<std::string> values; // parsed by set_field per point
};

// Cartesian product over the axes; point k runs the base preset with the
// axis values applied and master seed derive(master_seed, k), in
// output_dir/point_<k>/. A long-format sweep_points.csv indexes the points.
RunManifest run_sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes);

// Produces plot-ready files for a finished run (line series for fig3, a
// median heatmap matrix for fig4a/fig4b) next to the manifest, and records
// them in it. Throws ConfigError if the manifest lists no data files.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& output_dir);

} // namespace tlsgap::harness
