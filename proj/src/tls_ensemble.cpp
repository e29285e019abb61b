#include "tlsgap/tls_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tlsgap/constants.hpp"
#include "tlsgap/csv.hpp"
#include "tlsgap/errors.hpp"
#include "tlsgap/rng.hpp"

namespace tlsgap {

void validate(const EnsembleConfig& c) {
    if (!(c.p0 > 0)) throw ConfigError("ensemble: p0 must be positive");
    if (!(c.volume > 0)) throw ConfigError("ensemble: volume must be positive");
    if (!(c.bandwidth > 0)) throw ConfigError("ensemble: bandwidth must be positive");
    if (!(c.delta0_min > 0 && c.delta0_min < c.delta0_max && c.delta0_max <= 1.0))
        throw ConfigError("ensemble: require 0 < delta0_min < delta0_max <= 1");
    if (!(c.t1_min > 0)) throw ConfigError("ensemble: t1_min must be positive");
    if (!(c.omega_rabi_max >= 0)) throw ConfigError("ensemble: omega_rabi_max must be >= 0");
    if (c.n_tls < 1) throw ConfigError("ensemble: n_tls must be >= 1");
    if (!(c.qubit_frequency > 0)) throw ConfigError("ensemble: qubit_frequency must be positive");
}

double expected_tls_count(double p0, double volume, double bandwidth,
                          double delta0_min) {
    if (!(p0 > 0) || !(volume > 0) || !(bandwidth > 0) || !(delta0_min > 0))
        throw std::domain_error("expected_tls_count: all arguments must be positive");
    if (delta0_min >= 1.0)
        throw std::domain_error("expected_tls_count: delta0_min must be < 1");
    return p0 * volume * (kPlanck * bandwidth) * std::log(1.0 / delta0_min);
}

std::size_t derived_tls_count(const EnsembleConfig& config) {
    const double n = expected_tls_count(config.p0, config.volume,
                                        config.bandwidth, config.delta0_min);
    return static_cast<std::size_t>(std::max(1.0, std::round(n)));
}

TlsEnsemble sample_ensemble(const EnsembleConfig& config) {
    validate(config);
    TlsEnsemble ensemble;
    ensemble.config = config;
    ensemble.seed_used = config.seed;
    ensemble.members.reserve(config.n_tls);

    SplitMix64 rng(config.seed);
    const double log_min = std::log(config.delta0_min);
    const double log_max = std::log(config.delta0_max);

    for (std::size_t i = 0; i < config.n_tls; ++i) {
        TlsParams tls;
        tls.delta0 = std::exp(log_min + (log_max - log_min) * rng.next_double());
        tls.dipole_factor = rng.next_double();
        // Angle from the plane of an isotropically oriented dipole: density
        // proportional to cos(theta) on [0, pi/2].
        tls.theta = std::asin(rng.next_double());
        tls.detuning_hz = rng.next_double(-0.5 * config.bandwidth, 0.5 * config.bandwidth);
        tls.t1_intrinsic = config.t1_min / (tls.delta0 * tls.delta0);
        tls.omega_hz = config.omega_rabi_max * tls.delta0 * tls.dipole_factor;
        ensemble.members.push_back(tls);
    }
    return ensemble;
}

EnsembleConfig bulk_validation_config(int omega_choice) {
    if (omega_choice != 0 && omega_choice != 1)
        throw ConfigError("bulk_validation_config: omega_choice must be 0 (87 kHz) or 1 (870 kHz)");
    EnsembleConfig c;
    c.p0 = 5e43;
    c.volume = 6.4e-15;
    c.bandwidth = 1e7;
    c.n_tls = 10000;
    c.delta0_min = 0.01;
    c.t1_min = 1e-7;
    c.omega_rabi_max = (omega_choice == 0) ? 87e3 : 870e3;
    return c;
}

void write_ensemble_csv(const TlsEnsemble& ensemble, std::ostream& out) {
    const EnsembleConfig& c = ensemble.config;
    out << "# tlsgap ensemble v" << kVersion << ", rng " << kRngAlgorithm << "\n";
    out << "# seed = " << ensemble.seed_used << "\n";
    out << "# p0 = " << csv::fmt(c.p0) << ", volume = " << csv::fmt(c.volume)
        << ", bandwidth = " << csv::fmt(c.bandwidth) << "\n";
    out << "# delta0_min = " << csv::fmt(c.delta0_min)
        << ", delta0_max = " << csv::fmt(c.delta0_max)
        << ", t1_min = " << csv::fmt(c.t1_min)
        << ", omega_rabi_max = " << csv::fmt(c.omega_rabi_max) << "\n";
    out << "# qubit_frequency = " << csv::fmt(c.qubit_frequency)
        << ", n_tls = " << c.n_tls << ", expected_tls_count = "
        << csv::fmt(expected_tls_count(c.p0, c.volume, c.bandwidth, c.delta0_min))
        << "\n";
    out << "delta0,dipole_factor,theta,detuning_hz,t1_s,omega_hz\n";
    for (const TlsParams& tls : ensemble.members) {
        out << csv::fmt(tls.delta0) << ',' << csv::fmt(tls.dipole_factor) << ','
            << csv::fmt(tls.theta) << ',' << csv::fmt(tls.detuning_hz) << ','
            << csv::fmt(tls.t1_intrinsic) << ',' << csv::fmt(tls.omega_hz) << '\n';
    }
}

} // namespace tlsgap
