#include "tlsgap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "tlsgap/constants.hpp"
#include "tlsgap/csv.hpp"
#include "tlsgap/errors.hpp"
#include "tlsgap/integrate.hpp"
#include "tlsgap/kernels/arrowhead.hpp"

namespace tlsgap {

namespace {

std::vector<double> uniform_grid(double horizon, std::size_t n_out) {
    std::vector<double> t(n_out);
    for (std::size_t i = 0; i < n_out; ++i)
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(n_out - 1);
    t.back() = horizon;
    return t;
}

void check_generator(const ArrowheadGenerator& gen) {
    const std::size_t n = gen.size();
    if (gen.tls_detunings_hz.size() != n || gen.decay_rates.size() != n)
        throw ConfigError("generator: field lengths disagree");
    for (double g : gen.decay_rates)
        if (g < 0) throw ConfigError("generator: negative decay rate");
}

} // namespace

ArrowheadGenerator build_generator(const TlsEnsemble& ensemble) {
    if (ensemble.members.empty())
        throw ConfigError("build_generator: empty ensemble");
    ArrowheadGenerator gen;
    const std::size_t n = ensemble.members.size();
    gen.tls_detunings_hz.reserve(n);
    gen.couplings_hz.reserve(n);
    gen.decay_rates.reserve(n);
    for (const TlsParams& tls : ensemble.members) {
        gen.tls_detunings_hz.push_back(tls.detuning_hz);
        gen.couplings_hz.push_back(0.5 * tls.omega_hz);
        gen.decay_rates.push_back(1.0 / tls.t1_intrinsic);
    }
    return gen;
}

ArrowheadGenerator build_generator(const TlsEnsemble& ensemble, const GapSpec& gap) {
    ArrowheadGenerator gen = build_generator(ensemble);
    for (std::size_t j = 0; j < ensemble.members.size(); ++j)
        gen.decay_rates[j] = 1.0 / effective_tls_t1(ensemble.members[j], gap);
    return gen;
}

ArrowheadGenerator build_generator_isotropic(const TlsEnsemble& ensemble,
                                             double t1_multiplier) {
    if (!(t1_multiplier > 0))
        throw ConfigError("build_generator_isotropic: multiplier must be positive");
    ArrowheadGenerator gen = build_generator(ensemble);
    for (double& rate : gen.decay_rates) rate /= t1_multiplier;
    return gen;
}

QubitTrace propagate(const ArrowheadGenerator& gen, const ExcitationState& initial,
                     std::span<const double> output_times,
                     const PropagateOptions& options) {
    check_generator(gen);
    if (initial.tls_amplitudes.size() != gen.size())
        throw ConfigError("propagate: initial state size does not match the generator");
    double norm2 = std::norm(initial.qubit_amplitude);
    for (const auto& a : initial.tls_amplitudes) norm2 += std::norm(a);
    if (norm2 > 1.0 + 1e-9)
        throw ConfigError("propagate: initial state norm exceeds 1");
    if (output_times.empty() || output_times.front() < initial.time)
        throw ConfigError("propagate: output grid must start at or after the initial time");
    for (std::size_t i = 0; i + 1 < output_times.size(); ++i)
        if (!(output_times[i] < output_times[i + 1]))
            throw ConfigError("propagate: output grid must be strictly increasing");
    if (!(options.tolerance > 0 && options.tolerance <= 1e-3))
        throw ConfigError("propagate: tolerance must be in (0, 1e-3]");

    const std::size_t n = gen.size();
    const std::size_t dim = n + 1; // hub + TLSs

    // Angular-frequency parameters. couplings enter H as 2*pi*(Omega/2).
    std::vector<double> g_ang(n), dr(n), di(n);
    for (std::size_t j = 0; j < n; ++j) {
        g_ang[j] = kTwoPi * gen.couplings_hz[j];
        dr[j] = -0.5 * gen.decay_rates[j];
        di[j] = -kTwoPi * gen.tls_detunings_hz[j];
    }
    const double dq_ang = kTwoPi * gen.qubit_detuning_hz;

    if (options.dense_reference && n > 64)
        throw ConfigError("propagate: dense reference path is limited to N <= 64");

    // Split layout: y = [re_0 .. re_N, im_0 .. im_N], hub at index 0.
    std::vector<double> y(2 * dim, 0.0);
    y[0] = initial.qubit_amplitude.real();
    y[dim] = initial.qubit_amplitude.imag();
    for (std::size_t j = 0; j < n; ++j) {
        y[1 + j] = initial.tls_amplitudes[j].real();
        y[dim + 1 + j] = initial.tls_amplitudes[j].imag();
    }

    Eigen::MatrixXcd minus_iH;
    if (options.dense_reference) {
        const std::complex<double> I(0, 1);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
        H(0, 0) = dq_ang;
        for (std::size_t j = 0; j < n; ++j) {
            H(0, j + 1) = g_ang[j];
            H(j + 1, 0) = g_ang[j];
            H(j + 1, j + 1) =
                std::complex<double>(-di[j], dr[j]); // delta - i gamma/2
        }
        minus_iH = -I * H;
    }

    auto fast_rhs = [&](double, const double* yv, double* dy) {
        const double* xr = yv;
        const double* xi = yv + dim;
        double* or_ = dy;
        double* oi = dy + dim;
        double sum_re = 0, sum_im = 0;
        kernels::arrowhead_apply(n, xr + 1, xi + 1, dr.data(), di.data(),
                                 g_ang.data(), xr[0], xi[0], or_ + 1, oi + 1,
                                 &sum_re, &sum_im);
        // hub: -i dq x_q - i sum
        or_[0] = dq_ang * xi[0] + sum_im;
        oi[0] = -dq_ang * xr[0] - sum_re;
    };

    auto dense_rhs = [&](double, const double* yv, double* dy) {
        Eigen::VectorXcd psi(dim);
        for (std::size_t i = 0; i < dim; ++i)
            psi(i) = std::complex<double>(yv[i], yv[dim + i]);
        Eigen::VectorXcd out = minus_iH * psi;
        for (std::size_t i = 0; i < dim; ++i) {
            dy[i] = out(i).real();
            dy[dim + i] = out(i).imag();
        }
    };

    QubitTrace trace;
    trace.times.assign(output_times.begin(), output_times.end());
    const std::size_t n_out = trace.times.size();
    trace.p_qubit.resize(n_out);
    trace.p_tls_total.resize(n_out);
    trace.p_emitted.resize(n_out);

    IntegratorOptions iopt;
    iopt.rtol = options.tolerance;
    iopt.atol = options.tolerance * 1e-4;
    iopt.record_steps = options.record_steps;
    iopt.replay_steps = options.replay_steps;

    auto emit = [&](std::size_t i, double, std::span<const double> s) {
        const double pq = s[0] * s[0] + s[dim] * s[dim];
        double ptls = 0;
        for (std::size_t j = 1; j < dim; ++j)
            ptls += s[j] * s[j] + s[dim + j] * s[dim + j];
        const double norm2 = pq + ptls;
        if (!std::isfinite(norm2) || norm2 > 1.0 + 10.0 * options.tolerance)
            throw ToleranceError("propagate: norm guard tripped (norm^2 = " +
                                 std::to_string(norm2) + ")");
        trace.p_qubit[i] = pq;
        trace.p_tls_total[i] = ptls;
        trace.p_emitted[i] = 1.0 - norm2;
    };

    if (options.dense_reference)
        integrate_dopri5(dense_rhs, std::span<double>(y), initial.time, output_times,
                         emit, iopt);
    else
        integrate_dopri5(fast_rhs, std::span<double>(y), initial.time, output_times,
                         emit, iopt);

    trace.metadata.solver = kIntegratorName;
    trace.metadata.tolerance = options.tolerance;
    std::ostringstream ss;
    ss << "propagate n_tls=" << n
       << " matvec=" << (options.dense_reference ? "dense" : kernels::active_kernel_set());
    trace.metadata.params = ss.str();
    return trace;
}

QubitTrace propagate(const ArrowheadGenerator& gen,
                     std::span<const double> output_times,
                     const PropagateOptions& options) {
    ExcitationState initial;
    initial.tls_amplitudes.assign(gen.size(), {0.0, 0.0});
    return propagate(gen, initial, output_times, options);
}

QubitTrace propagate(const ArrowheadGenerator& gen, double horizon_s,
                     std::size_t n_out, const PropagateOptions& options) {
    if (!(horizon_s > 0)) throw ConfigError("propagate: horizon must be positive");
    if (n_out < 2) throw ConfigError("propagate: need at least 2 output points");
    const std::vector<double> grid = uniform_grid(horizon_s, n_out);
    return propagate(gen, grid, options);
}

QubitTrace lindblad_oracle(const ArrowheadGenerator& gen, double horizon_s,
                           std::size_t n_out, InitialState initial,
                           std::vector<double>* purity_out) {
    check_generator(gen);
    const std::size_t n = gen.size();
    if (n > 4)
        throw std::domain_error("lindblad_oracle: restricted to N <= 4 TLSs");
    if (!(horizon_s > 0)) throw ConfigError("lindblad_oracle: horizon must be positive");
    if (n_out < 2) throw ConfigError("lindblad_oracle: need at least 2 output points");
    if (initial == InitialState::first_tls_excited && n == 0)
        throw ConfigError("lindblad_oracle: no TLS to excite");

    using Mat = Eigen::MatrixXcd;
    const std::size_t dim = n + 2; // |ground>, |qubit>, |tls_j>
    const std::complex<double> I(0, 1);

    Mat H = Mat::Zero(dim, dim);
    H(1, 1) = kTwoPi * gen.qubit_detuning_hz;
    double scale = std::abs(H(1, 1).real());
    for (std::size_t j = 0; j < n; ++j) {
        const double g = kTwoPi * gen.couplings_hz[j];
        const double d = kTwoPi * gen.tls_detunings_hz[j];
        H(1, 2 + j) = g;
        H(2 + j, 1) = g;
        H(2 + j, 2 + j) = d;
        scale = std::max({scale, std::abs(g), std::abs(d), gen.decay_rates[j]});
    }

    auto rhs = [&](const Mat& rho) {
        Mat drho = -I * (H * rho - rho * H);
        for (std::size_t j = 0; j < n; ++j) {
            const double gam = gen.decay_rates[j];
            if (gam == 0) continue;
            drho(0, 0) += gam * rho(2 + j, 2 + j);
            drho.row(2 + j) -= 0.5 * gam * rho.row(2 + j);
            drho.col(2 + j) -= 0.5 * gam * rho.col(2 + j);
        }
        return drho;
    };

    Mat rho = Mat::Zero(dim, dim);
    if (initial == InitialState::qubit_excited)
        rho(1, 1) = 1.0;
    else
        rho(2, 2) = 1.0;

    QubitTrace trace;
    trace.times = uniform_grid(horizon_s, n_out);
    trace.p_qubit.resize(n_out);
    trace.p_tls_total.resize(n_out);
    trace.p_emitted.resize(n_out);
    if (purity_out) purity_out->assign(n_out, 0.0);

    const double out_dt = horizon_s / static_cast<double>(n_out - 1);
    // Classic RK4; step set by the fastest rate in the generator.
    const double h_target = (scale > 0) ? 5e-3 / scale : out_dt;
    const auto n_sub = static_cast<std::size_t>(
        std::max<double>(1.0, std::ceil(out_dt / h_target)));
    const double h = out_dt / static_cast<double>(n_sub);

    auto store = [&](std::size_t i) {
        trace.p_qubit[i] = rho(1, 1).real();
        double ptls = 0;
        for (std::size_t j = 0; j < n; ++j) ptls += rho(2 + j, 2 + j).real();
        trace.p_tls_total[i] = ptls;
        trace.p_emitted[i] = rho(0, 0).real();
        if (purity_out) (*purity_out)[i] = (rho * rho).trace().real();
    };

    store(0);
    for (std::size_t i = 1; i < n_out; ++i) {
        for (std::size_t s = 0; s < n_sub; ++s) {
            const Mat k1 = rhs(rho);
            const Mat k2 = rhs(rho + 0.5 * h * k1);
            const Mat k3 = rhs(rho + 0.5 * h * k2);
            const Mat k4 = rhs(rho + h * k3);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        store(i);
    }

    trace.metadata.solver = "lindblad-rk4/v1";
    trace.metadata.tolerance = h;
    std::ostringstream ss;
    ss << "lindblad_oracle n_tls=" << n << " dim=" << dim << " h=" << h;
    trace.metadata.params = ss.str();
    return trace;
}

T1Fit fit_decay_time(std::span<const double> times, std::span<const double> p) {
    if (times.size() != p.size() || times.size() < 3)
        throw ConfigError("fit_decay_time: need matching grids with >= 3 points");
    constexpr double kInvE = 0.36787944117144233;

    T1Fit fit;
    double pmin = p[0];
    for (double v : p) pmin = std::min(pmin, v);
    if (pmin > 0.9) {
        fit.non_decaying = true;
        return fit;
    }

    // First 1/e crossing, log-interpolated inside the bracketing interval.
    std::size_t cross = 0;
    bool crossed = false;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] < kInvE) {
            cross = i;
            crossed = true;
            break;
        }
    }

    auto log_linear_fit = [&](double lo, double hi) -> double {
        // least squares on ln p = a + b t over samples with lo <= p <= hi
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t m = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] <= 0 || p[i] < lo || p[i] > hi) continue;
            const double x = times[i], yv = std::log(p[i]);
            sx += x;
            sy += yv;
            sxx += x * x;
            sxy += x * yv;
            ++m;
        }
        if (m < 4) return 0.0;
        const double denom = m * sxx - sx * sx;
        if (denom <= 0) return 0.0;
        const double slope = (m * sxy - sx * sy) / denom;
        return (slope < 0) ? -1.0 / slope : 0.0;
    };

    if (crossed) {
        const std::size_t i = cross;
        const double p0 = p[i - 1], p1 = p[i];
        if (p0 > 0 && p1 > 0 && p0 > p1) {
            const double f = (std::log(p0) - std::log(kInvE)) / (std::log(p0) - std::log(p1));
            fit.crossing_time = times[i - 1] + f * (times[i] - times[i - 1]);
        } else {
            const double f = (p0 - kInvE) / (p0 - p1);
            fit.crossing_time = times[i - 1] + f * (times[i] - times[i - 1]);
        }

        for (std::size_t k = cross; k < p.size(); ++k) {
            if (p[k] > kInvE) {
                fit.oscillatory = true;
                break;
            }
        }
        if (fit.oscillatory) {
            fit.t1 = fit.crossing_time;
            return fit;
        }
        const double refined = log_linear_fit(0.05, 0.9);
        fit.t1 = (refined > 0) ? refined : fit.crossing_time;
        return fit;
    }

    // Dipped below 0.9 but never reached 1/e: extrapolate the log slope.
    const double extrapolated = log_linear_fit(0.05, 0.9);
    if (extrapolated > 0) {
        fit.t1 = extrapolated;
        fit.extrapolated = true;
    } else {
        fit.non_decaying = true;
    }
    return fit;
}

T1Fit fit_qubit_t1(const QubitTrace& trace) {
    return fit_decay_time(trace.times, trace.p_qubit);
}

double quality_factor(double t1_s, double qubit_frequency_hz) {
    if (!(t1_s > 0) || !(qubit_frequency_hz > 0))
        throw std::domain_error("quality_factor: t1 and frequency must be positive");
    return kTwoPi * qubit_frequency_hz * t1_s;
}

void write_qubit_trace_csv(const QubitTrace& trace, std::ostream& out) {
    out << "# solver = " << trace.metadata.solver
        << ", tolerance = " << csv::fmt(trace.metadata.tolerance) << "\n";
    if (!trace.metadata.params.empty())
        out << "# " << trace.metadata.params << "\n";
    out << "time_s,p_qubit,p_tls_total,p_emitted\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << csv::fmt(trace.times[i]) << ',' << csv::fmt(trace.p_qubit[i]) << ','
            << csv::fmt(trace.p_tls_total[i]) << ',' << csv::fmt(trace.p_emitted[i])
            << '\n';
    }
}

} // namespace tlsgap
