#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "tlsgap/errors.hpp"
#include "tlsgap/kernels/arrowhead.hpp"

namespace tlsgap {

// Adaptive explicit Runge-Kutta, Dormand-Prince 5(4) with PI step control,
// over a flat array of doubles (complex states are stored split re/im).
//
// The driver lands exactly on every requested output time by clamping the
// step, so traces never need interpolation. An accepted-step sequence can be
// recorded and replayed; replay executes the exact same step sizes with
// control disabled, which lets two right-hand sides be compared on identical
// step sequences (used by the dense-reference equivalence test).
//
// No shared mutable state: concurrent integrations are safe.

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    double h_init = 0.0;                 // 0 = choose automatically
    double h_max = std::numeric_limits<double>::infinity();
    std::uint64_t max_steps = 100'000'000;
    std::vector<double>* record_steps = nullptr;        // out: accepted h
    const std::vector<double>* replay_steps = nullptr;  // in: forced h sequence
};

namespace detail {

// DOPRI5 tableau (Dormand & Prince 1980, as in Hairer's DOPRI5).
inline constexpr double kA[5][5] = {
    {1.0 / 5, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
};
inline constexpr double kB[6] = {35.0 / 384,     0.0,       500.0 / 1113,
                                 125.0 / 192,    -2187.0 / 6784, 11.0 / 84};
inline constexpr double kE[7] = {71.0 / 57600,  0.0,  -71.0 / 16695,
                                 71.0 / 1920,   -17253.0 / 339200,
                                 22.0 / 525,    -1.0 / 40};
inline constexpr double kC[5] = {1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0};

} // namespace detail

// rhs(t, y, dydt) evaluates the derivative of the n-component system.
// emit(i, t, y) is called once per output time, in order.
template <class Rhs, class Emit>
void integrate_dopri5(Rhs&& rhs, std::span<double> y, double t0,
                      std::span<const double> out_times, Emit&& emit,
                      const IntegratorOptions& opt = {}) {
    using namespace detail;
    const std::size_t n = y.size();
    if (out_times.empty()) return;

    // Stage storage; k[0] doubles as the FSAL slot.
    std::vector<std::vector<double>> k(7, std::vector<double>(n));
    std::vector<double> ytmp(n), ynew(n), yerr(n);

    double t = t0;
    std::size_t out_idx = 0;
    while (out_idx < out_times.size() && out_times[out_idx] <= t0) {
        emit(out_idx, t0, std::span<const double>(y.data(), n));
        ++out_idx;
    }
    if (out_idx >= out_times.size()) return;
    const double t_end = out_times.back();

    rhs(t, y.data(), k[0].data());

    double h;
    if (opt.replay_steps) {
        h = opt.replay_steps->empty() ? (t_end - t0) : (*opt.replay_steps)[0];
    } else if (opt.h_init > 0) {
        h = opt.h_init;
    } else {
        // Conservative start: fraction of the span, limited by the initial
        // derivative scale so stiff decay rates are respected from step one.
        double ynorm = 0, fnorm = 0;
        for (std::size_t i = 0; i < n; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k[0][i]));
        }
        h = (fnorm > 0) ? 0.01 * std::max(ynorm, opt.atol) / fnorm
                        : (t_end - t0) * 1e-6;
        h = std::min(h, (t_end - t0) * 0.1);
    }
    h = std::min(h, opt.h_max);

    double err_prev = 1.0;
    std::uint64_t n_steps = 0;
    std::size_t replay_idx = 0;

    while (out_idx < out_times.size()) {
        if (++n_steps > opt.max_steps)
            throw ToleranceError("integrate_dopri5: step budget exhausted before horizon");

        // h_free is the controller's recommendation; the actually executed
        // step may be shorter when clamped onto an output time, in which case
        // the recommendation survives for the leg after the output point.
        bool clamped = false;
        double h_free = h;
        if (opt.replay_steps) {
            if (replay_idx >= opt.replay_steps->size())
                throw ToleranceError("integrate_dopri5: replay sequence shorter than run");
            h = (*opt.replay_steps)[replay_idx];
        } else {
            h = std::min(h, opt.h_max);
            h_free = h;
            const double target = out_times[out_idx];
            if (t + h >= target) {
                h = target - t;
                clamped = true;
            }
        }

        const double* stages[6];
        for (std::size_t s = 0; s < 5; ++s) {
            for (std::size_t m = 0; m <= s; ++m) stages[m] = k[m].data();
            kernels::lincomb(n, ytmp.data(), y.data(), h, s + 1, kA[s], stages);
            rhs(t + kC[s] * h, ytmp.data(), k[s + 1].data());
        }
        for (std::size_t m = 0; m < 6; ++m) stages[m] = k[m].data();
        kernels::lincomb(n, ynew.data(), y.data(), h, 6, kB, stages);
        rhs(t + h, ynew.data(), k[6].data());

        for (std::size_t i = 0; i < n; ++i) {
            yerr[i] = h * (kE[0] * k[0][i] + kE[2] * k[2][i] + kE[3] * k[3][i] +
                           kE[4] * k[4][i] + kE[5] * k[5][i] + kE[6] * k[6][i]);
        }
        double err = kernels::error_norm(n, yerr.data(), y.data(), ynew.data(),
                                         opt.atol, opt.rtol);

        const bool accept = opt.replay_steps || (std::isfinite(err) && err <= 1.0);

        if (accept) {
            t = clamped ? out_times[out_idx] : t + h;
            std::copy(ynew.begin(), ynew.end(), y.begin());
            std::swap(k[0], k[6]); // FSAL
            if (opt.record_steps) opt.record_steps->push_back(h);
            ++replay_idx;

            while (out_idx < out_times.size() &&
                   t >= out_times[out_idx] - 1e-12 * std::max(1.0, std::abs(t))) {
                emit(out_idx, out_times[out_idx], std::span<const double>(y.data(), n));
                ++out_idx;
            }

            if (!opt.replay_steps) {
                err = std::max(err, 1e-10);
                double fac = 0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04);
                h = clamped ? h_free : h * std::clamp(fac, 0.2, 10.0);
                err_prev = err;
            }
        } else {
            h *= std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5)
                                    : 0.1;
            if (h < 1e-14 * std::max(std::abs(t), std::abs(t_end)))
                throw ToleranceError(
                    "integrate_dopri5: step size underflow; requested local error "
                    "cannot be met");
        }
    }
}

} // namespace tlsgap
