#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tlsgap/tls_ensemble.hpp"

namespace tlsgap {

// The bandgap as seen by one TLS: fractional suppression of the phonon
// spectral density, modeled as a Lorentzian dip of half-width `width_hz`
// centered at `center_hz`, with separate depths for dipoles oscillating in
// and out of the metal plane.
struct GapSpec {
    double depth = 0.0;           // Lambda in [0,1] at gap center
    double center_hz = 0.0;       // gap center frequency
    double width_hz = 0.5e9;      // Lorentzian half-width (1 GHz full gap)
    double s_parallel = 0.0;      // depth for in-plane dipoles
    double s_perpendicular = 0.0; // depth for out-of-plane dipoles
};

void validate(const GapSpec& gap);

// Flat bath of golden-rule rate `baseline_rate` minus the Lorentzian dip:
//   D(omega) = (rate / 2 pi) * [1 - depth * w^2 / ((omega - omega_g)^2 + w^2)]
struct SpectralDensity {
    double baseline_rate = 1e6; // 1/s, = 1/T1_intrinsic
    GapSpec gap;
};

struct TraceMetadata {
    std::string solver;
    double tolerance = 0.0;
    std::string params;
};

// Excited-state probability of a single TLS, with the complex amplitude kept
// for diagnostics and CSV export.
struct DecayTrace {
    std::vector<double> times;
    std::vector<double> excited_probability;
    std::vector<std::complex<double>> amplitude;
    TraceMetadata metadata;
};

// Wide-gap, on-resonance asymptotic lifetime multiplier 1/(1-depth).
// Throws PerfectGapError at depth == 1.
double t1_enhancement(double depth);

// Exact single-excitation dynamics in the gapped bath. The Lorentzian dip
// admits a finite embedding: one damped auxiliary mode b coupled to the TLS
// amplitude c,
//   dc/dt = -(rate/2) c + b
//   db/dt = depth (rate w/2) c - (w + i dg) b,    w = 2 pi width, dg = 2 pi (center - f_tls)
// solved with the adaptive integrator; returns |c(t)|^2 on a uniform grid.
DecayTrace gapped_decay(const SpectralDensity& spectral, double tls_frequency_hz,
                        double horizon_s, double tolerance = 1e-10,
                        std::size_t n_out = 2001);

// Independent check: direct trapezoidal discretization of the memory-kernel
// form, dc/dt = -(rate/2) c + depth (rate w/2) * int_0^t exp(-(w+i dg)(t-t')) c(t') dt'.
// Preconditions: rate*step < 1e-2 and w*step < 1e-1 (throws ToleranceError).
DecayTrace volterra_oracle(const SpectralDensity& spectral, double tls_frequency_hz,
                           double horizon_s, double step_s,
                           std::size_t n_out = 2001);

// Suppression depth seen by a dipole at angle theta from the plane:
// s_parallel cos^2 + s_perpendicular sin^2 (cross terms vanish under the
// azimuthal average of the radiated power).
double angular_depth(const GapSpec& gap, double theta);

struct AngularAverage {
    double mean_depth;       // int Lambda(theta) w(theta) dtheta
    double mean_rate_factor; // int (1 - Lambda) w dtheta
    double mean_t1_factor;   // int w / (1 - Lambda) dtheta
};

// Averages over a normalized angular density on [0, pi/2]. Throws
// PerfectGapError if Lambda reaches 1 on the integration range and
// ConfigError if the weight is not normalized.
AngularAverage angular_average(const std::function<double(double)>& depth_of_theta,
                               const std::function<double(double)>& weight,
                               const std::vector<double>* break_points = nullptr);
AngularAverage angular_average(const GapSpec& gap,
                               const std::function<double(double)>& weight);

// Tabulated suppression-vs-angle curve, linearly interpolated; import format
// is a two-column CSV (theta_radians, depth).
class SuppressionCurve {
public:
    SuppressionCurve(std::vector<double> theta, std::vector<double> depth);
    static SuppressionCurve from_csv(const std::filesystem::path& path);

    double operator()(double theta) const;
    const std::vector<double>& knots() const { return theta_; }

private:
    std::vector<double> theta_, depth_;
};

AngularAverage angular_average(const SuppressionCurve& curve,
                               const std::function<double(double)>& weight);

// Built-in angular densities on [0, pi/2], both normalized.
namespace angular_weight {
// Isotropic dipole orientation: density of the angle from the plane, cos(theta).
double isotropic(double theta);
// Literal sin(theta) weighting (kept selectable; see README).
double sine(double theta);
} // namespace angular_weight

// t1_intrinsic / (1 - angular_depth(gap, theta)); PerfectGapError at depth 1.
double effective_tls_t1(const TlsParams& tls, const GapSpec& gap);

// DecayTrace CSV: (time_s, p_excited, re_amplitude, im_amplitude).
void write_trace_csv(const DecayTrace& trace, std::ostream& out);

} // namespace tlsgap
