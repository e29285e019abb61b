#include "tlsgap/gap_response.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "tlsgap/constants.hpp"
#include "tlsgap/csv.hpp"
#include "tlsgap/errors.hpp"
#include "tlsgap/integrate.hpp"
#include "tlsgap/quadrature.hpp"

namespace tlsgap {

namespace {

std::vector<double> uniform_grid(double horizon, std::size_t n_out) {
    std::vector<double> t(n_out);
    for (std::size_t i = 0; i < n_out; ++i)
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(n_out - 1);
    t.back() = horizon;
    return t;
}

} // namespace

void validate(const GapSpec& gap) {
    if (!(gap.depth >= 0.0 && gap.depth <= 1.0))
        throw ConfigError("gap: depth must be in [0,1]");
    if (!(gap.width_hz > 0)) throw ConfigError("gap: width must be positive");
    if (!(gap.s_parallel >= 0 && gap.s_parallel <= 1) ||
        !(gap.s_perpendicular >= 0 && gap.s_perpendicular <= 1))
        throw ConfigError("gap: anisotropic depths must be in [0,1]");
}

double t1_enhancement(double depth) {
    if (depth < 0 || depth > 1)
        throw std::domain_error("t1_enhancement: depth outside [0,1]");
    if (depth == 1.0)
        throw PerfectGapError("t1_enhancement: lifetime diverges at depth 1");
    return 1.0 / (1.0 - depth);
}

DecayTrace gapped_decay(const SpectralDensity& spectral, double tls_frequency_hz,
                        double horizon_s, double tolerance, std::size_t n_out) {
    validate(spectral.gap);
    if (!(horizon_s > 0)) throw ConfigError("gapped_decay: horizon must be positive");
    if (!(spectral.baseline_rate > 0))
        throw ConfigError("gapped_decay: baseline rate must be positive");
    if (n_out < 2) throw ConfigError("gapped_decay: need at least 2 output points");

    const double rate = spectral.baseline_rate;
    const double w_ang = kTwoPi * spectral.gap.width_hz;
    const double dg_ang = kTwoPi * (spectral.gap.center_hz - tls_frequency_hz);
    const double feed = spectral.gap.depth * rate * w_ang * 0.5;

    // State: [Re c, Im c, Re b, Im b].
    auto rhs = [&](double, const double* y, double* dy) {
        dy[0] = -0.5 * rate * y[0] + y[2];
        dy[1] = -0.5 * rate * y[1] + y[3];
        dy[2] = feed * y[0] - w_ang * y[2] + dg_ang * y[3];
        dy[3] = feed * y[1] - w_ang * y[3] - dg_ang * y[2];
    };

    DecayTrace trace;
    trace.times = uniform_grid(horizon_s, n_out);
    trace.excited_probability.resize(n_out);
    trace.amplitude.resize(n_out);

    double y[4] = {1.0, 0.0, 0.0, 0.0};
    IntegratorOptions opt;
    opt.rtol = tolerance;
    opt.atol = tolerance * 1e-4;
    integrate_dopri5(rhs, std::span<double>(y, 4), 0.0, trace.times,
                     [&](std::size_t i, double, std::span<const double> s) {
                         trace.amplitude[i] = {s[0], s[1]};
                         trace.excited_probability[i] = s[0] * s[0] + s[1] * s[1];
                     },
                     opt);

    trace.metadata.solver = kIntegratorName;
    trace.metadata.tolerance = tolerance;
    std::ostringstream ss;
    ss << "gapped_decay rate=" << rate << " depth=" << spectral.gap.depth
       << " width_hz=" << spectral.gap.width_hz << " detuning_hz="
       << (spectral.gap.center_hz - tls_frequency_hz);
    trace.metadata.params = ss.str();
    return trace;
}

DecayTrace volterra_oracle(const SpectralDensity& spectral, double tls_frequency_hz,
                           double horizon_s, double step_s, std::size_t n_out) {
    validate(spectral.gap);
    if (!(horizon_s > 0)) throw ConfigError("volterra_oracle: horizon must be positive");
    if (!(step_s > 0)) throw ConfigError("volterra_oracle: step must be positive");

    const double rate = spectral.baseline_rate;
    const double w_ang = kTwoPi * spectral.gap.width_hz;
    const double dg_ang = kTwoPi * (spectral.gap.center_hz - tls_frequency_hz);
    if (rate * step_s >= 1e-2 || w_ang * step_s >= 1e-1)
        throw ToleranceError(
            "volterra_oracle: step too large (need rate*step < 1e-2 and "
            "2*pi*width*step < 1e-1)");

    const std::complex<double> kappa(w_ang, dg_ang);
    const double feed = spectral.gap.depth * rate * w_ang * 0.5;

    DecayTrace trace;
    trace.times = uniform_grid(horizon_s, n_out);
    trace.excited_probability.resize(n_out);
    trace.amplitude.resize(n_out);

    const double out_dt = horizon_s / static_cast<double>(n_out - 1);
    const auto n_sub = static_cast<std::size_t>(std::ceil(out_dt / step_s));
    const double h = out_dt / static_cast<double>(n_sub);
    const std::complex<double> decay = std::exp(-kappa * h);

    // c: TLS amplitude; J: trapezoidal running sum of exp(-kappa (t-t')) c(t').
    std::complex<double> c = 1.0, J = 0.0;
    auto deriv = [&](std::complex<double> cv, std::complex<double> Jv) {
        return -0.5 * rate * cv + feed * Jv;
    };

    trace.amplitude[0] = c;
    trace.excited_probability[0] = std::norm(c);
    for (std::size_t i = 1; i < n_out; ++i) {
        for (std::size_t s = 0; s < n_sub; ++s) {
            const std::complex<double> carried = decay * (J + 0.5 * h * c);
            const std::complex<double> f0 = deriv(c, J);
            const std::complex<double> c_pred = c + h * f0;
            const std::complex<double> J_pred = carried + 0.5 * h * c_pred;
            const std::complex<double> c_next =
                c + 0.5 * h * (f0 + deriv(c_pred, J_pred));
            J = carried + 0.5 * h * c_next;
            c = c_next;
        }
        trace.amplitude[i] = c;
        trace.excited_probability[i] = std::norm(c);
    }

    trace.metadata.solver = "volterra-trapezoid/v1";
    trace.metadata.tolerance = h;
    std::ostringstream ss;
    ss << "volterra_oracle rate=" << rate << " depth=" << spectral.gap.depth
       << " width_hz=" << spectral.gap.width_hz << " step=" << h;
    trace.metadata.params = ss.str();
    return trace;
}

double angular_depth(const GapSpec& gap, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return gap.s_parallel * c * c + gap.s_perpendicular * s * s;
}

namespace angular_weight {
double isotropic(double theta) { return std::cos(theta); }
double sine(double theta) { return std::sin(theta); }
} // namespace angular_weight

AngularAverage angular_average(const std::function<double(double)>& depth_of_theta,
                               const std::function<double(double)>& weight,
                               const std::vector<double>* break_points) {
    const double half_pi = 0.5 * kPi;
    const double norm = integrate_gk(weight, 0.0, half_pi, 1e-10, 1e-14, break_points);
    if (std::abs(norm - 1.0) > 1e-6)
        throw ConfigError("angular_average: weight must be a normalized density on [0, pi/2]");

    auto guarded_depth = [&](double th) {
        const double d = depth_of_theta(th);
        if (d >= 1.0 && weight(th) > 0.0)
            throw PerfectGapError("angular_average: depth reaches 1 on the support of the weight");
        return d;
    };

    AngularAverage avg{};
    avg.mean_depth = integrate_gk(
        [&](double th) { return guarded_depth(th) * weight(th); }, 0.0, half_pi,
        1e-9, 1e-13, break_points);
    avg.mean_rate_factor = integrate_gk(
        [&](double th) { return (1.0 - guarded_depth(th)) * weight(th); }, 0.0,
        half_pi, 1e-9, 1e-13, break_points);
    avg.mean_t1_factor = integrate_gk(
        [&](double th) { return weight(th) / (1.0 - guarded_depth(th)); }, 0.0,
        half_pi, 1e-9, 1e-13, break_points);
    return avg;
}

AngularAverage angular_average(const GapSpec& gap,
                               const std::function<double(double)>& weight) {
    validate(gap);
    return angular_average([&](double th) { return angular_depth(gap, th); },
                           weight, nullptr);
}

SuppressionCurve::SuppressionCurve(std::vector<double> theta, std::vector<double> depth)
    : theta_(std::move(theta)), depth_(std::move(depth)) {
    if (theta_.size() != depth_.size() || theta_.size() < 2)
        throw ConfigError("suppression curve: need at least two (theta, depth) rows");
    for (std::size_t i = 0; i + 1 < theta_.size(); ++i)
        if (!(theta_[i] < theta_[i + 1]))
            throw ConfigError("suppression curve: theta values must be strictly increasing");
    for (double d : depth_)
        if (!(d >= 0.0 && d <= 1.0))
            throw ConfigError("suppression curve: depths must lie in [0,1]");
}

SuppressionCurve SuppressionCurve::from_csv(const std::filesystem::path& path) {
    auto rows = csv::read_two_columns(path);
    std::vector<double> theta, depth;
    theta.reserve(rows.size());
    depth.reserve(rows.size());
    for (auto& [t, d] : rows) {
        theta.push_back(t);
        depth.push_back(d);
    }
    return SuppressionCurve(std::move(theta), std::move(depth));
}

double SuppressionCurve::operator()(double theta) const {
    if (theta <= theta_.front()) return depth_.front();
    if (theta >= theta_.back()) return depth_.back();
    const auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
    const std::size_t i = static_cast<std::size_t>(it - theta_.begin());
    const double f = (theta - theta_[i - 1]) / (theta_[i] - theta_[i - 1]);
    return depth_[i - 1] + f * (depth_[i] - depth_[i - 1]);
}

AngularAverage angular_average(const SuppressionCurve& curve,
                               const std::function<double(double)>& weight) {
    const std::vector<double>& knots = curve.knots();
    return angular_average([&](double th) { return curve(th); }, weight, &knots);
}

double effective_tls_t1(const TlsParams& tls, const GapSpec& gap) {
    const double depth = angular_depth(gap, tls.theta);
    if (depth >= 1.0)
        throw PerfectGapError("effective_tls_t1: angular depth reaches 1");
    return tls.t1_intrinsic / (1.0 - depth);
}

void write_trace_csv(const DecayTrace& trace, std::ostream& out) {
    out << "# solver = " << trace.metadata.solver
        << ", tolerance = " << csv::fmt(trace.metadata.tolerance) << "\n";
    if (!trace.metadata.params.empty())
        out << "# " << trace.metadata.params << "\n";
    out << "time_s,p_excited,re_amplitude,im_amplitude\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << csv::fmt(trace.times[i]) << ',' << csv::fmt(trace.excited_probability[i])
            << ',' << csv::fmt(trace.amplitude[i].real()) << ','
            << csv::fmt(trace.amplitude[i].imag()) << '\n';
    }
}

} // namespace tlsgap
