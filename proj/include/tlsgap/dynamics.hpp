#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tlsgap/gap_response.hpp"
#include "tlsgap/tls_ensemble.hpp"

namespace tlsgap {

// One-excitation wavefunction of qubit + N TLSs. Norm leakage equals the
// cumulative emitted-phonon probability.
struct ExcitationState {
    std::complex<double> qubit_amplitude{1.0, 0.0};
    std::vector<std::complex<double>> tls_amplitudes;
    double time = 0.0;
};

// Effective generator on the one-excitation subspace, rotating frame at the
// qubit frequency. Hermitian part is an arrowhead (dense hub row/column,
// diagonal TLS block); the anti-Hermitian part is the diagonal -gamma_j/2.
struct ArrowheadGenerator {
    double qubit_detuning_hz = 0.0;      // 0 in the rotating frame
    std::vector<double> tls_detunings_hz;
    std::vector<double> couplings_hz;    // exchange elements Omega_j / 2
    std::vector<double> decay_rates;     // gamma_j = 1/T1_j, 1/s

    std::size_t size() const { return couplings_hz.size(); }
};

struct QubitTrace {
    std::vector<double> times;
    std::vector<double> p_qubit;
    std::vector<double> p_tls_total;
    std::vector<double> p_emitted; // 1 - total norm
    TraceMetadata metadata;
};

// Ungapped: gamma_j = 1/t1_intrinsic.
ArrowheadGenerator build_generator(const TlsEnsemble& ensemble);
// Anisotropic gap: gamma_j = 1/effective_tls_t1(tls_j, gap).
ArrowheadGenerator build_generator(const TlsEnsemble& ensemble, const GapSpec& gap);
// Isotropic mode (no angular dependence): every T1 multiplied by one factor.
ArrowheadGenerator build_generator_isotropic(const TlsEnsemble& ensemble,
                                             double t1_multiplier);

struct PropagateOptions {
    double tolerance = 1e-8; // in (0, 1e-3]
    // Dense reference path multiplies by the explicitly assembled matrix via
    // Eigen instead of the O(N) arrowhead kernels; N <= 64.
    bool dense_reference = false;
    std::vector<double>* record_steps = nullptr;
    const std::vector<double>* replay_steps = nullptr;
};

// Integrates dpsi/dt = -i H_eff psi from the qubit-excited state and emits
// (p_qubit, p_tls_total, p_emitted) on the output grid. Throws ToleranceError
// if the controller stalls or the norm guard (1 + 10*tolerance) trips.
QubitTrace propagate(const ArrowheadGenerator& gen,
                     std::span<const double> output_times,
                     const PropagateOptions& options = {});
QubitTrace propagate(const ArrowheadGenerator& gen, double horizon_s,
                     std::size_t n_out = 501, const PropagateOptions& options = {});
// Same propagation from an arbitrary one-excitation state; integration
// starts at initial.time and the grid must not precede it.
QubitTrace propagate(const ArrowheadGenerator& gen, const ExcitationState& initial,
                     std::span<const double> output_times,
                     const PropagateOptions& options = {});

enum class InitialState { qubit_excited, first_tls_excited };

// Full density-matrix Lindblad propagation on the (N+2)-dimensional space
// (one-excitation sector plus global ground), collapse operators
// sqrt(gamma_j) sigma_j^-. Restricted to N <= 4; classic fixed-step RK4,
// deliberately separate from the adaptive path it verifies. Optionally
// reports Tr(rho^2) per output time.
QubitTrace lindblad_oracle(const ArrowheadGenerator& gen, double horizon_s,
                           std::size_t n_out = 501,
                           InitialState initial = InitialState::qubit_excited,
                           std::vector<double>* purity_out = nullptr);

struct T1Fit {
    double t1 = 0.0;             // seconds; meaningless when non_decaying
    double crossing_time = 0.0;  // first p = 1/e crossing when one exists
    bool oscillatory = false;    // revivals above 1/e after the crossing
    bool non_decaying = false;   // never below 0.9 (or unfittable)
    bool extrapolated = false;   // no crossing in range; log-linear fit only
};

// 1/e-crossing estimator refined by log-linear least squares over
// p in [0.05, 0.9]. Oscillatory traces report the crossing itself.
T1Fit fit_decay_time(std::span<const double> times, std::span<const double> p);
T1Fit fit_qubit_t1(const QubitTrace& trace);

// Q = 2 pi f T1.
double quality_factor(double t1_s, double qubit_frequency_hz);

// QubitTrace CSV: (time_s, p_qubit, p_tls_total, p_emitted).
void write_qubit_trace_csv(const QubitTrace& trace, std::ostream& out);

} // namespace tlsgap
