#include "tlsgap/harness/presets.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "tlsgap/constants.hpp"
#include "tlsgap/csv.hpp"
#include "tlsgap/dynamics.hpp"
#include "tlsgap/errors.hpp"
#include "tlsgap/kernels/arrowhead.hpp"
#include "tlsgap/rng.hpp"
#include "tlsgap/steady_state.hpp"

namespace fs = std::filesystem;

namespace tlsgap::harness {

namespace {

// Runs fn(0..n-1) on up to `jobs` workers. Task failures are collected, not
// propagated, so one bad seed cannot abort a sweep.
void parallel_for(std::size_t n, unsigned jobs,
                  const std::function<void(std::size_t)>& fn,
                  std::vector<std::string>& errors) {
    jobs = std::max(1u, std::min<unsigned>(jobs, std::thread::hardware_concurrency()));
    std::mutex err_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n) return;
            try {
                fn(k);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                errors.push_back("task " + std::to_string(k) + ": " + e.what());
            }
        }
    };
    if (jobs == 1 || n <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, n); ++w)
        pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return (v.size() % 2) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string flag(bool b) { return b ? "1" : "0"; }

void common_versions(RunManifest& manifest) {
    manifest.versions["tlsgap"] = kVersion;
    manifest.versions["rng"] = kRngAlgorithm;
    manifest.versions["integrator"] = kIntegratorName;
    manifest.versions["kernels"] = kernels::active_kernel_set();
}

// ---------------------------------------------------------------- fig3 ----

void run_fig3(const ExperimentConfig& config, const fs::path& dir,
              RunManifest& manifest) {
    std::vector<fs::path> trace_files;
    std::vector<T1Fit> fits(config.fig3.depths.size());
    std::vector<DecayTrace> traces(config.fig3.depths.size());

    parallel_for(
        config.fig3.depths.size(), config.jobs,
        [&](std::size_t i) {
            const double depth = config.fig3.depths[i];
            SpectralDensity sd;
            sd.baseline_rate = config.fig3.gamma0;
            sd.gap.depth = depth;
            sd.gap.center_hz = 0.0; // centered on resonance
            sd.gap.width_hz = config.fig3.width_hz;
            const double horizon =
                (config.horizon > 0)
                    ? config.horizon
                    : 6.0 / (config.fig3.gamma0 * std::max(1.0 - depth, 5e-3));
            traces[i] = gapped_decay(sd, 0.0, horizon, config.tolerance,
                                     config.fig3.n_out);
            fits[i] = fit_decay_time(traces[i].times, traces[i].excited_probability);
        },
        manifest.errors);

    auto& summary = manifest.summary["fig3"] = nlohmann::json::array();
    {
        csv::Writer fit_file(dir / "fig3_fits.csv");
        fit_file.comment("gamma0 = " + csv::fmt(config.fig3.gamma0) +
                         ", width_hz = " + csv::fmt(config.fig3.width_hz));
        fit_file.raw("depth,t1_s,t1_over_intrinsic,oscillatory");
        for (std::size_t i = 0; i < config.fig3.depths.size(); ++i) {
            if (traces[i].times.empty()) continue; // failed task, recorded already
            const fs::path f =
                dir / ("fig3_trace_depth" + csv::fmt(config.fig3.depths[i]) + ".csv");
            std::ofstream out(f, std::ios::binary);
            write_trace_csv(traces[i], out);
            out.close();
            trace_files.push_back(f);

            const double enh = fits[i].t1 * config.fig3.gamma0;
            fit_file.row({csv::fmt(config.fig3.depths[i]), csv::fmt(fits[i].t1),
                          csv::fmt(enh), flag(fits[i].oscillatory)});
            summary.push_back({{"depth", config.fig3.depths[i]},
                               {"t1_s", fits[i].t1},
                               {"t1_over_intrinsic", enh}});
        }
    }
    for (const auto& f : trace_files) manifest.add_file(dir, f);
    manifest.add_file(dir, dir / "fig3_fits.csv");
}

// ------------------------------------------------ fig4 / custom / bulk ----

struct ExchangeCell {
    QubitTrace trace;
    T1Fit fit;
    bool ok = false;
};

// One (grid value, seed) propagation used by fig4a/fig4b/custom.
void run_exchange_grid(const ExperimentConfig& config, const fs::path& dir,
                       const std::string& prefix, const std::vector<double>& t1_grid,
                       RunManifest& manifest) {
    const std::vector<std::uint64_t> seeds = config.derived_seeds();
    const std::size_t n_seeds = seeds.size();
    const double horizon = (config.horizon > 0) ? config.horizon : 1e-4;
    const std::size_t n_tasks = t1_grid.size() * n_seeds;
    std::vector<ExchangeCell> cells(n_tasks);

    const bool anisotropic = (config.preset == "custom" && config.custom.gap_mode == "anisotropic");
    const bool isotropic = (config.preset == "custom" && config.custom.gap_mode == "isotropic");

    parallel_for(
        n_tasks, config.jobs,
        [&](std::size_t k) {
            const std::size_t ti = k / n_seeds;
            const std::size_t si = k % n_seeds;
            EnsembleConfig ec = config.ensemble;
            ec.t1_min = t1_grid[ti];
            ec.seed = seeds[si];
            const TlsEnsemble ensemble = sample_ensemble(ec);
            ArrowheadGenerator gen;
            if (anisotropic)
                gen = build_generator(ensemble, config.gap);
            else if (isotropic)
                gen = build_generator_isotropic(ensemble, config.custom.isotropic_t1_factor);
            else
                gen = build_generator(ensemble);
            PropagateOptions opt;
            opt.tolerance = config.tolerance;
            cells[k].trace = propagate(gen, horizon, config.fig4.n_out, opt);
            cells[k].fit = fit_qubit_t1(cells[k].trace);
            cells[k].ok = true;
        },
        manifest.errors);

    // Long-format heatmap: one row per (t1_min, time, seed).
    {
        csv::Writer heat(dir / (prefix + "_heatmap.csv"));
        heat.comment("omega_rabi_max_hz = " + csv::fmt(config.ensemble.omega_rabi_max) +
                     ", n_tls = " + std::to_string(config.ensemble.n_tls) +
                     ", horizon_s = " + csv::fmt(horizon));
        heat.raw("t1_min_s,time_s,p_qubit,seed");
        for (std::size_t ti = 0; ti < t1_grid.size(); ++ti) {
            for (std::size_t si = 0; si < n_seeds; ++si) {
                const ExchangeCell& cell = cells[ti * n_seeds + si];
                if (!cell.ok) continue;
                for (std::size_t p = 0; p < cell.trace.times.size(); ++p) {
                    heat.row({csv::fmt(t1_grid[ti]), csv::fmt(cell.trace.times[p]),
                              csv::fmt(cell.trace.p_qubit[p]), std::to_string(seeds[si])});
                }
            }
        }
    }

    // Per-seed fits plus per-grid-point medians.
    auto& summary = manifest.summary[prefix] = nlohmann::json::array();
    {
        csv::Writer fitf(dir / (prefix + "_fits.csv"));
        fitf.raw("t1_min_s,seed,t1_s,crossing_time_s,oscillatory,non_decaying,extrapolated");
        csv::Writer medf(dir / (prefix + "_fits_median.csv"));
        medf.raw("t1_min_s,n_ok,median_t1_s,n_oscillatory,n_non_decaying,"
                 "median_trace_min_p,median_trace_t1_s,median_trace_oscillatory");

        for (std::size_t ti = 0; ti < t1_grid.size(); ++ti) {
            std::vector<double> t1s;
            std::size_t n_ok = 0, n_osc = 0, n_nondecay = 0;
            for (std::size_t si = 0; si < n_seeds; ++si) {
                const ExchangeCell& cell = cells[ti * n_seeds + si];
                if (!cell.ok) continue;
                ++n_ok;
                const T1Fit& f = cell.fit;
                if (f.oscillatory) ++n_osc;
                if (f.non_decaying)
                    ++n_nondecay;
                else
                    t1s.push_back(f.t1);
                fitf.row({csv::fmt(t1_grid[ti]), std::to_string(seeds[si]),
                          f.non_decaying ? "nan" : csv::fmt(f.t1),
                          csv::fmt(f.crossing_time), flag(f.oscillatory),
                          flag(f.non_decaying), flag(f.extrapolated)});
            }

            // Pointwise median trace across the seeds that completed.
            std::vector<double> med_p, med_times;
            T1Fit med_fit;
            med_fit.non_decaying = true; // until a median trace exists
            double med_min = std::numeric_limits<double>::quiet_NaN();
            if (n_ok > 0) {
                const std::size_t n_pts = config.fig4.n_out;
                med_p.resize(n_pts);
                std::vector<double> column;
                column.reserve(n_ok);
                for (std::size_t p = 0; p < n_pts; ++p) {
                    column.clear();
                    for (std::size_t si = 0; si < n_seeds; ++si) {
                        const ExchangeCell& cell = cells[ti * n_seeds + si];
                        if (cell.ok) column.push_back(cell.trace.p_qubit[p]);
                    }
                    med_p[p] = median_of(column);
                }
                for (std::size_t si = 0; si < n_seeds; ++si)
                    if (cells[ti * n_seeds + si].ok) {
                        med_times = cells[ti * n_seeds + si].trace.times;
                        break;
                    }
                med_fit = fit_decay_time(med_times, med_p);
                med_min = *std::min_element(med_p.begin(), med_p.end());
            }

            const double med_t1 = median_of(t1s);
            medf.row({csv::fmt(t1_grid[ti]), std::to_string(n_ok), csv::fmt(med_t1),
                      std::to_string(n_osc), std::to_string(n_nondecay),
                      csv::fmt(med_min),
                      med_fit.non_decaying ? "nan" : csv::fmt(med_fit.t1),
                      flag(med_fit.oscillatory)});
            summary.push_back({{"t1_min_s", t1_grid[ti]},
                               {"n_ok", n_ok},
                               {"median_t1_s", med_t1},
                               {"n_oscillatory", n_osc},
                               {"n_non_decaying", n_nondecay},
                               {"oscillatory_majority", n_ok > 0 && 2 * n_osc > n_ok},
                               {"median_trace_min_p", med_min},
                               {"median_trace_oscillatory", med_fit.oscillatory}});
        }
    }

    manifest.add_file(dir, dir / (prefix + "_heatmap.csv"));
    manifest.add_file(dir, dir / (prefix + "_fits.csv"));
    manifest.add_file(dir, dir / (prefix + "_fits_median.csv"));

    if (config.preset == "custom") {
        // Custom runs keep the first sampled ensemble and its trace for
        // inspection.
        EnsembleConfig ec = config.ensemble;
        ec.t1_min = t1_grid.front();
        ec.seed = seeds.front();
        const TlsEnsemble ensemble = sample_ensemble(ec);
        const fs::path f = dir / "custom_ensemble.csv";
        std::ofstream out(f, std::ios::binary);
        write_ensemble_csv(ensemble, out);
        out.close();
        manifest.add_file(dir, f);
        if (cells.front().ok) {
            const fs::path tf = dir / "custom_trace.csv";
            std::ofstream tout(tf, std::ios::binary);
            write_qubit_trace_csv(cells.front().trace, tout);
            tout.close();
            manifest.add_file(dir, tf);
        }
    }
}

// ---------------------------------------------------------------- bulk ----

void run_bulk(const ExperimentConfig& config, const fs::path& dir,
              RunManifest& manifest) {
    struct BulkCase {
        double omega_hz;
        double horizon_s;
    };
    // 870 kHz transfers within tens of ns; 87 kHz needs a few microseconds.
    const BulkCase cases[2] = {
        {87e3, (config.horizon > 0) ? config.horizon : 5e-6},
        {870e3, (config.horizon > 0) ? config.horizon : 3e-7},
    };
    const std::vector<std::uint64_t> seeds = config.derived_seeds();
    const std::size_t n_seeds = seeds.size();
    std::vector<ExchangeCell> cells(2 * n_seeds);

    parallel_for(
        cells.size(), config.jobs,
        [&](std::size_t k) {
            const std::size_t ci = k / n_seeds;
            const std::size_t si = k % n_seeds;
            EnsembleConfig ec = bulk_validation_config(static_cast<int>(ci));
            ec.t1_min = config.ensemble.t1_min;
            ec.qubit_frequency = config.ensemble.qubit_frequency;
            ec.seed = seeds[si];
            const TlsEnsemble ensemble = sample_ensemble(ec);
            const ArrowheadGenerator gen = build_generator(ensemble);
            PropagateOptions opt;
            opt.tolerance = config.tolerance;
            cells[k].trace = propagate(gen, cases[ci].horizon_s, 2001, opt);
            cells[k].fit = fit_qubit_t1(cells[k].trace);
            cells[k].ok = true;
        },
        manifest.errors);

    auto& summary = manifest.summary["bulk_validation"] = nlohmann::json::array();
    {
        csv::Writer fitf(dir / "bulk_fits.csv");
        fitf.comment("volume = " + csv::fmt(6.4e-15) + " m^3, n_tls = 10000, t1_min = " +
                     csv::fmt(config.ensemble.t1_min));
        fitf.raw("omega_rabi_max_hz,seed,t1_s,crossing_time_s,q_i,oscillatory");
        csv::Writer sumf(dir / "bulk_summary.csv");
        sumf.raw("omega_rabi_max_hz,n_ok,median_t1_s,median_q_i");
        for (std::size_t ci = 0; ci < 2; ++ci) {
            std::vector<double> t1s, qs;
            std::size_t n_ok = 0;
            for (std::size_t si = 0; si < n_seeds; ++si) {
                const ExchangeCell& cell = cells[ci * n_seeds + si];
                if (!cell.ok || cell.fit.non_decaying) continue;
                ++n_ok;
                const double q =
                    quality_factor(cell.fit.t1, config.ensemble.qubit_frequency);
                t1s.push_back(cell.fit.t1);
                qs.push_back(q);
                fitf.row({csv::fmt(cases[ci].omega_hz), std::to_string(seeds[si]),
                          csv::fmt(cell.fit.t1), csv::fmt(cell.fit.crossing_time),
                          csv::fmt(q), flag(cell.fit.oscillatory)});
            }
            sumf.row({csv::fmt(cases[ci].omega_hz), std::to_string(n_ok),
                      csv::fmt(median_of(t1s)), csv::fmt(median_of(qs))});
            summary.push_back({{"omega_rabi_max_hz", cases[ci].omega_hz},
                               {"n_ok", n_ok},
                               {"median_t1_s", median_of(t1s)},
                               {"median_q_i", median_of(qs)}});
        }
    }
    manifest.add_file(dir, dir / "bulk_fits.csv");
    manifest.add_file(dir, dir / "bulk_summary.csv");
}

// ------------------------------------------------------------- angular ----

void run_angular(const ExperimentConfig& config, const fs::path& dir,
                 RunManifest& manifest) {
    const SuppressionCurve curve = SuppressionCurve::from_csv(config.angular.curve_path);
    std::vector<std::pair<std::string, double (*)(double)>> weights;
    if (config.angular.weight == "isotropic" || config.angular.weight == "both")
        weights.emplace_back("isotropic", &angular_weight::isotropic);
    if (config.angular.weight == "sine" || config.angular.weight == "both")
        weights.emplace_back("sine", &angular_weight::sine);

    auto& summary = manifest.summary["angular_average"] = nlohmann::json::array();
    {
        csv::Writer out(dir / "angular_triple.csv");
        out.comment("curve = " + config.angular.curve_path);
        out.raw("weight,mean_depth,mean_rate_factor,mean_t1_factor");
        for (const auto& [name, w] : weights) {
            const AngularAverage avg = angular_average(curve, w);
            out.row({name, csv::fmt(avg.mean_depth), csv::fmt(avg.mean_rate_factor),
                     csv::fmt(avg.mean_t1_factor)});
            summary.push_back({{"weight", name},
                               {"mean_depth", avg.mean_depth},
                               {"mean_rate_factor", avg.mean_rate_factor},
                               {"mean_t1_factor", avg.mean_t1_factor}});
        }
    }
    manifest.add_file(dir, dir / "angular_triple.csv");
}

// ---------------------------------------------------------------- loss ----

void run_loss(const ExperimentConfig& config, const fs::path& dir,
              RunManifest& manifest) {
    LossModel model;
    model.tan_delta0 = config.loss.tan_delta0;
    model.e_c = 1.0; // sweep in units of e_ac / e_c
    const LossModel gapped = rescale_for_gap(model, config.loss.t1_factor);

    {
        csv::Writer out(dir / "loss_sweep.csv");
        out.comment("t1_factor = " + csv::fmt(config.loss.t1_factor));
        out.raw("e_ac_over_ec,tan_delta,tan_delta_gapped,ratio");
        const double la = std::log(config.loss.field_min_over_ec);
        const double lb = std::log(config.loss.field_max_over_ec);
        for (std::size_t i = 0; i < config.loss.points; ++i) {
            const double f = static_cast<double>(i) /
                             static_cast<double>(config.loss.points - 1);
            const double e = std::exp(la + f * (lb - la));
            const double t0 = loss_tangent(model, e);
            const double t1 = loss_tangent(gapped, e);
            out.row({csv::fmt(e), csv::fmt(t0), csv::fmt(t1), csv::fmt(t1 / t0)});
        }
    }
    manifest.summary["loss_sweep"] = {{"t1_factor", config.loss.t1_factor},
                                      {"tan_delta0", config.loss.tan_delta0}};
    manifest.add_file(dir, dir / "loss_sweep.csv");
}

} // namespace

RunManifest run_preset(const ExperimentConfig& raw_config) {
    ExperimentConfig config = raw_config;
    if (config.ensemble.n_tls == 0) { // 0 requests the derived count
        try {
            config.ensemble.n_tls = derived_tls_count(config.ensemble);
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    validate(config);
    const auto started = std::chrono::steady_clock::now();

    const fs::path dir = config.output_dir;
    fs::create_directories(dir);

    RunManifest manifest;
    manifest.config_snapshot = config.snapshot();
    common_versions(manifest);

    if (config.preset == "fig3") {
        run_fig3(config, dir, manifest);
    } else if (config.preset == "fig4a" || config.preset == "fig4b") {
        run_exchange_grid(config, dir, config.preset, config.fig4_grid(), manifest);
    } else if (config.preset == "custom") {
        run_exchange_grid(config, dir, "custom", {config.ensemble.t1_min}, manifest);
    } else if (config.preset == "bulk_validation") {
        run_bulk(config, dir, manifest);
    } else if (config.preset == "angular_average") {
        run_angular(config, dir, manifest);
    } else if (config.preset == "loss_sweep") {
        run_loss(config, dir, manifest);
    } else {
        throw ConfigError("unknown preset '" + config.preset + "'");
    }

    manifest.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    manifest.write(dir);
    return manifest;
}

RunManifest run_sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes) {
    if (axes.empty()) throw ConfigError("sweep: need at least one axis");
    for (const SweepAxis& ax : axes) {
        if (ax.values.empty())
            throw ConfigError("sweep: axis '" + ax.key + "' has no values");
        ExperimentConfig probe = base;
        set_field(probe, ax.key, ax.values.front()); // key existence check
    }

    const auto started = std::chrono::steady_clock::now();
    std::size_t n_points = 1;
    for (const SweepAxis& ax : axes) n_points *= ax.values.size();

    const fs::path dir = base.output_dir;
    fs::create_directories(dir);

    RunManifest manifest;
    manifest.config_snapshot = base.snapshot();
    common_versions(manifest);
    auto& points_summary = manifest.summary["sweep"] = nlohmann::json::array();

    {
        csv::Writer index(dir / "sweep_points.csv");
        std::string header = "point,seed";
        for (const SweepAxis& ax : axes) header += "," + ax.key;
        index.raw(header);

        for (std::size_t k = 0; k < n_points; ++k) {
            ExperimentConfig cfg = base;
            std::size_t rem = k;
            std::vector<std::string> assigned;
            for (const SweepAxis& ax : axes) {
                const std::size_t i = rem % ax.values.size();
                rem /= ax.values.size();
                set_field(cfg, ax.key, ax.values[i]);
                assigned.push_back(ax.values[i]);
            }
            cfg.master_seed = SplitMix64::derive(base.master_seed, k);
            cfg.output_dir = (dir / ("point_" + std::to_string(k))).string();

            const RunManifest sub = run_preset(cfg);
            for (const std::string& e : sub.errors)
                manifest.errors.push_back("point_" + std::to_string(k) + ": " + e);

            std::vector<std::string> row{std::to_string(k),
                                         std::to_string(cfg.master_seed)};
            row.insert(row.end(), assigned.begin(), assigned.end());
            index.row(row);

            nlohmann::json jp;
            jp["point"] = k;
            jp["master_seed"] = cfg.master_seed;
            for (std::size_t a = 0; a < axes.size(); ++a)
                jp[axes[a].key] = assigned[a];
            jp["summary"] = sub.summary;
            points_summary.push_back(jp);
        }
    }

    manifest.add_file(dir, dir / "sweep_points.csv");
    for (std::size_t k = 0; k < n_points; ++k) {
        const fs::path pdir = dir / ("point_" + std::to_string(k));
        for (const auto& entry : fs::recursive_directory_iterator(pdir))
            if (entry.is_regular_file()) manifest.add_file(dir, entry.path());
    }

    manifest.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    manifest.write(dir);
    return manifest;
}

std::vector<fs::path> emit_plot_data(const fs::path& output_dir) {
    const fs::path manifest_path = output_dir / "manifest.json";
    RunManifest manifest = RunManifest::load(manifest_path);
    if (manifest.files.empty())
        throw ConfigError("emit_plot_data: manifest lists no data files");

    const std::string preset = manifest.config_snapshot.value("preset", "");
    std::vector<fs::path> produced;

    if (preset == "fig3") {
        // One series per gap depth, long format.
        const fs::path out = output_dir / "plot_fig3_series.csv";
        csv::Writer w(out);
        w.raw("depth,time_s,p_excited");
        const auto depths =
            manifest.config_snapshot["fig3"]["depths"].get<std::vector<double>>();
        bool any = false;
        for (double depth : depths) {
            const fs::path f =
                output_dir / ("fig3_trace_depth" + csv::fmt(depth) + ".csv");
            if (!fs::exists(f)) continue;
            for (const auto& row : csv::read_numeric_rows(f))
                if (row.size() >= 2) {
                    w.row({csv::fmt(depth), csv::fmt(row[0]), csv::fmt(row[1])});
                    any = true;
                }
        }
        if (!any) throw ConfigError("emit_plot_data: no fig3 traces found");
        produced.push_back(out);
    } else if (preset == "fig4a" || preset == "fig4b") {
        // Median p_qubit matrix: rows = t1_min (log grid), columns = time.
        const fs::path heat = output_dir / (preset + "_heatmap.csv");
        if (!fs::exists(heat))
            throw ConfigError("emit_plot_data: missing " + heat.string());
        std::map<double, std::map<double, std::vector<double>>> grouped;
        for (const auto& row : csv::read_numeric_rows(heat))
            if (row.size() >= 3) grouped[row[0]][row[1]].push_back(row[2]);
        if (grouped.empty())
            throw ConfigError("emit_plot_data: heatmap file has no data rows");

        const fs::path out = output_dir / ("plot_" + preset + "_matrix.csv");
        csv::Writer w(out);
        {
            std::string header = "t1_min_s_by_time_s";
            for (const auto& [time, _] : grouped.begin()->second)
                header += "," + csv::fmt(time);
            w.raw(header);
        }
        for (auto& [t1_min, columns] : grouped) {
            std::vector<std::string> cells{csv::fmt(t1_min)};
            for (auto& [time, values] : columns)
                cells.push_back(csv::fmt(median_of(values)));
            w.row(cells);
        }
        produced.push_back(out);
    } else {
        // Remaining presets already emit plot-shaped tables; nothing to do.
        return produced;
    }

    for (const auto& f : produced) manifest.add_file(output_dir, f);
    manifest.write(output_dir);
    return produced;
}

} // namespace tlsgap::harness
