#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace tlsgap {

// Physical ensemble parameters. delta0 is the tunneling amplitude normalized
// to the qubit energy, so t1 = t1_min and omega = omega_rabi_max * dipole at
// delta0 = 1. Frequencies in Hz, times in seconds.
struct EnsembleConfig {
    double p0 = 5e43;             // TLS spectral density, 1/(J m^3)
    double volume = 1e-16;        // m^3
    double bandwidth = 1e7;       // Hz, full window around the qubit
    double delta0_min = 0.01;
    double delta0_max = 1.0;
    double t1_min = 1e-7;         // s, TLS relaxation time at delta0 = 1
    double omega_rabi_max = 45e3; // Hz, maximum vacuum exchange rate
    std::size_t n_tls = 200;
    double qubit_frequency = 5e9; // Hz
    std::uint64_t seed = 1;
};

// Throws ConfigError if any invariant is violated.
void validate(const EnsembleConfig& config);

struct TlsParams {
    double delta0;        // normalized tunneling amplitude, [delta0_min, 1]
    double dipole_factor; // u in [0,1], projection onto the local field
    double theta;         // radians from the metal plane, [0, pi/2]
    double detuning_hz;   // TLS frequency minus qubit frequency
    double t1_intrinsic;  // s, = t1_min / delta0^2
    double omega_hz;      // Hz, = omega_rabi_max * delta0 * dipole_factor
};

struct TlsEnsemble {
    std::vector<TlsParams> members;
    EnsembleConfig config;
    std::uint64_t seed_used = 0;
};

// Count of TLSs in the window with tunneling amplitude above delta0_min,
// under the 1/delta0 density: N = p0 * V * (h * bandwidth) * ln(1/delta0_min).
double expected_tls_count(double p0, double volume, double bandwidth,
                          double delta0_min);

// The same count rounded to a usable ensemble size (at least 1). n_tls can
// be set explicitly or taken from here; harness configs use n_tls = 0 to
// request the derived value.
std::size_t derived_tls_count(const EnsembleConfig& config);

// Draws n_tls members i.i.d.: delta0 log-uniform on [delta0_min, delta0_max],
// dipole_factor uniform on [0,1], theta from the isotropic-orientation
// density (prop. to cos theta on [0, pi/2]), detuning uniform over the
// bandwidth window. Pure function of (config, seed).
TlsEnsemble sample_ensemble(const EnsembleConfig& config);

// Preset used to recover known bulk decay rates: larger volume, 10^4 TLSs.
// omega_choice 0 selects omega_rabi_max = 87 kHz, 1 selects 870 kHz.
EnsembleConfig bulk_validation_config(int omega_choice = 0);

// One row per TLS; '#' comment header carries the config and seed.
void write_ensemble_csv(const TlsEnsemble& ensemble, std::ostream& out);

} // namespace tlsgap
