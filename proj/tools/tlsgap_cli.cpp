// tlsgap command line: named experiment presets, parameter sweeps and
// plot-data emission. Exit codes: 0 success, 2 configuration error,
// 1 runtime failure; errors go to stderr as one-line JSON.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tlsgap/errors.hpp"
#include "tlsgap/harness/config.hpp"
#include "tlsgap/harness/presets.hpp"

namespace {

using tlsgap::harness::ExperimentConfig;

struct CommonFlags {
    std::string config_file;
    std::string output_dir;
    std::string seed;
    std::string jobs;
    std::string tolerance;
    std::string horizon;
    std::vector<std::string> overrides; // key=value pairs
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_file, "Configuration file (key = value with [sections])");
    cmd->add_option("--output-dir", flags.output_dir, "Output directory (env TLSGAP_OUTPUT_DIR overrides the default)");
    cmd->add_option("--seed", flags.seed, "Master seed");
    cmd->add_option("--jobs", flags.jobs, "Parallel workers for seeds/grid points");
    cmd->add_option("--tolerance", flags.tolerance, "Integrator relative tolerance");
    cmd->add_option("--horizon", flags.horizon, "Simulation horizon in seconds (0 = preset default)");
    cmd->add_option("--set", flags.overrides, "Extra dotted-key override, e.g. --set ensemble.n_tls=50")
        ->take_all();
}

ExperimentConfig build_config(const std::string& preset, const CommonFlags& flags) {
    ExperimentConfig config = tlsgap::harness::default_config(preset);
    if (!flags.config_file.empty())
        tlsgap::harness::apply_config_file(config, flags.config_file);
    config.preset = preset; // the subcommand wins over the file

    if (const char* env = std::getenv("TLSGAP_OUTPUT_DIR")) config.output_dir = env;
    if (!flags.output_dir.empty()) config.output_dir = flags.output_dir;
    if (!flags.seed.empty()) tlsgap::harness::set_field(config, "master_seed", flags.seed);
    if (!flags.jobs.empty()) tlsgap::harness::set_field(config, "jobs", flags.jobs);
    if (!flags.tolerance.empty()) tlsgap::harness::set_field(config, "tolerance", flags.tolerance);
    if (!flags.horizon.empty()) tlsgap::harness::set_field(config, "horizon", flags.horizon);
    for (const std::string& kv : flags.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw tlsgap::ConfigError("--set expects key=value, got '" + kv + "'");
        tlsgap::harness::set_field(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return config;
}

int fail(const char* kind, const std::string& message, int code) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << std::endl;
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tlsgap: TLS / phononic-bandgap lifetime and loss simulator"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list-presets", "List available presets");

    CommonFlags run_flags;
    std::string run_preset_name;
    auto* run_cmd = app.add_subcommand("run", "Run a named preset");
    run_cmd->add_option("preset", run_preset_name, "Preset name")->required();
    add_common(run_cmd, run_flags);

    CommonFlags sweep_flags;
    std::string sweep_preset_name = "fig3";
    std::vector<std::string> axis_specs;
    auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian sweep over config fields");
    sweep_cmd->add_option("--preset", sweep_preset_name, "Base preset");
    sweep_cmd->add_option("--axis", axis_specs, "Axis spec key=v1,v2,... (repeatable)")
        ->required()
        ->take_all();
    add_common(sweep_cmd, sweep_flags);

    std::string plot_dir;
    auto* plot_cmd = app.add_subcommand("plot-data", "Emit plot-ready files for a finished run");
    plot_cmd->add_option("--manifest-dir", plot_dir, "Output directory holding manifest.json")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const std::string& name : tlsgap::harness::preset_names())
                std::cout << name << "\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            const ExperimentConfig config = build_config(run_preset_name, run_flags);
            const auto manifest = tlsgap::harness::run_preset(config);
            std::cout << "wrote " << manifest.files.size() << " files to "
                      << config.output_dir << "\n";
            for (const std::string& e : manifest.errors)
                std::cerr << "warning: " << e << "\n";
            return 0;
        }
        if (sweep_cmd->parsed()) {
            ExperimentConfig config = build_config(sweep_preset_name, sweep_flags);
            std::vector<tlsgap::harness::SweepAxis> axes;
            for (const std::string& spec : axis_specs) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos)
                    throw tlsgap::ConfigError("--axis expects key=v1,v2,..., got '" + spec + "'");
                tlsgap::harness::SweepAxis ax;
                ax.key = spec.substr(0, eq);
                std::string rest = spec.substr(eq + 1);
                std::size_t pos = 0;
                while (pos != std::string::npos) {
                    const auto comma = rest.find(',', pos);
                    const std::string v =
                        rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
                    if (!v.empty()) ax.values.push_back(v);
                    pos = (comma == std::string::npos) ? comma : comma + 1;
                }
                axes.push_back(std::move(ax));
            }
            const auto manifest = tlsgap::harness::run_sweep(config, axes);
            std::cout << "sweep wrote " << manifest.files.size() << " files to "
                      << config.output_dir << "\n";
            for (const std::string& e : manifest.errors)
                std::cerr << "warning: " << e << "\n";
            return 0;
        }
        if (plot_cmd->parsed()) {
            const auto files = tlsgap::harness::emit_plot_data(plot_dir);
            for (const auto& f : files) std::cout << f.string() << "\n";
            return 0;
        }
    } catch (const tlsgap::ConfigError& e) {
        return fail("config", e.what(), 2);
    } catch (const std::invalid_argument& e) {
        return fail("config", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), 1);
    }
    return 0;
}
