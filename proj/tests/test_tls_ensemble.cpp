#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "tlsgap/constants.hpp"
#include "tlsgap/errors.hpp"
#include "tlsgap/tls_ensemble.hpp"

using namespace tlsgap;

namespace {

// Kolmogorov-Smirnov statistic of a sample against a CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(f - i / n));
    }
    return d;
}

EnsembleConfig big_config(std::size_t n = 100000, std::uint64_t seed = 12345) {
    EnsembleConfig c;
    c.n_tls = n;
    c.seed = seed;
    return c;
}

} // namespace

TEST_CASE("expected_tls_count reproduces the accounting numbers") {
    // 200-TLS window of the small-volume setup: formula gives ~152.6.
    CHECK(expected_tls_count(5e43, 1e-16, 1e7, 0.01) == doctest::Approx(152.57).epsilon(2e-3));
    // Bulk window: ~1e4 TLSs.
    CHECK(expected_tls_count(5e43, 6.4e-15, 1e7, 0.01) == doctest::Approx(9764.7).epsilon(2e-3));
}

TEST_CASE("expected_tls_count limits and errors") {
    // Empty tunneling-amplitude window.
    CHECK(expected_tls_count(5e43, 1e-16, 1e7, 1.0 - 1e-14) == doctest::Approx(0.0).epsilon(1e-6));
    // Linear in p0.
    const double base = expected_tls_count(5e43, 1e-16, 1e7, 0.01);
    CHECK(expected_tls_count(1e44, 1e-16, 1e7, 0.01) == doctest::Approx(2.0 * base).epsilon(1e-15));
    CHECK_THROWS_AS(expected_tls_count(5e43, 1e-16, 1e7, 1.5), std::domain_error);
    CHECK_THROWS_AS(expected_tls_count(-5e43, 1e-16, 1e7, 0.5), std::domain_error);
    CHECK_THROWS_AS(expected_tls_count(5e43, 0.0, 1e7, 0.5), std::domain_error);
}

TEST_CASE("derived ensemble size rounds the expected count") {
    EnsembleConfig c; // 5e43, 1e-16, 1e7, 0.01 -> 152.57
    CHECK(derived_tls_count(c) == 153);
    c.volume = 6.4e-15;
    CHECK(derived_tls_count(c) == 9765);
    c.volume = 1e-30; // rounds to zero, clamped to a usable size
    CHECK(derived_tls_count(c) == 1);
}

TEST_CASE("monotone truncation: lowering delta0_min increases the count") {
    double prev = expected_tls_count(5e43, 1e-16, 1e7, 0.5);
    for (double dmin : {0.2, 0.05, 0.01, 0.001}) {
        const double n = expected_tls_count(5e43, 1e-16, 1e7, dmin);
        CHECK(n > prev);
        prev = n;
    }
}

TEST_CASE("sampling is a pure function of (config, seed)") {
    EnsembleConfig c;
    c.n_tls = 200;
    c.seed = 777;
    const TlsEnsemble a = sample_ensemble(c);
    const TlsEnsemble b = sample_ensemble(c);
    REQUIRE(a.members.size() == 200);
    for (std::size_t i = 0; i < a.members.size(); ++i) {
        CHECK(a.members[i].delta0 == b.members[i].delta0);
        CHECK(a.members[i].dipole_factor == b.members[i].dipole_factor);
        CHECK(a.members[i].theta == b.members[i].theta);
        CHECK(a.members[i].detuning_hz == b.members[i].detuning_hz);
    }
    c.seed = 778;
    const TlsEnsemble d = sample_ensemble(c);
    CHECK(a.members[0].delta0 != d.members[0].delta0);
}

TEST_CASE("delta0 follows the truncated 1/delta0 law") {
    const TlsEnsemble e = sample_ensemble(big_config());
    std::vector<double> d0;
    d0.reserve(e.members.size());
    for (const auto& m : e.members) d0.push_back(m.delta0);
    const double L = std::log(1.0 / 0.01);
    const double ks = ks_statistic(d0, [&](double x) { return std::log(x / 0.01) / L; });
    CHECK(ks < 0.01);                    // stated bound
    CHECK(ks < 1.63 / std::sqrt(1e5));   // alpha = 0.01 critical value
}

TEST_CASE("dipole factor, detuning and theta follow their laws") {
    const TlsEnsemble e = sample_ensemble(big_config(100000, 54321));
    std::vector<double> u, det, th;
    for (const auto& m : e.members) {
        u.push_back(m.dipole_factor);
        det.push_back(m.detuning_hz);
        th.push_back(m.theta);
    }
    const double crit = 1.63 / std::sqrt(1e5);
    CHECK(ks_statistic(u, [](double x) { return x; }) < crit);
    CHECK(ks_statistic(det, [](double x) { return (x + 5e6) / 1e7; }) < crit);
    // Isotropic orientation: angle-from-plane CDF is sin(theta).
    CHECK(ks_statistic(th, [](double x) { return std::sin(x); }) < crit);
}

TEST_CASE("sampled moments match the analytic values of the 1/delta0 law") {
    const TlsEnsemble e = sample_ensemble(big_config());
    const double L = std::log(100.0);
    double inv_mean = 0, inv2_mean = 0;
    for (const auto& m : e.members) {
        inv_mean += std::sqrt(m.t1_intrinsic / e.config.t1_min);
        inv2_mean += m.t1_intrinsic / e.config.t1_min;
    }
    inv_mean /= static_cast<double>(e.members.size());
    inv2_mean /= static_cast<double>(e.members.size());
    // E[1/delta0] = (1/0.01 - 1)/ln(100) ~ 21.5 and
    // E[1/delta0^2] = (1/0.01^2 - 1)/(2 ln 100) ~ 1085.6.
    CHECK(inv_mean == doctest::Approx(99.0 / L).epsilon(0.05));
    CHECK(inv2_mean == doctest::Approx(9999.0 / (2.0 * L)).epsilon(0.05));
}

TEST_CASE("derived fields satisfy their defining identities") {
    const TlsEnsemble e = sample_ensemble(big_config(2000, 9));
    for (const auto& m : e.members) {
        CHECK(std::abs(m.t1_intrinsic * m.delta0 * m.delta0 - e.config.t1_min) <=
              4e-16 * e.config.t1_min);
        if (m.delta0 > 0 && e.config.omega_rabi_max > 0)
            CHECK(std::abs(m.omega_hz / (e.config.omega_rabi_max * m.delta0) -
                           m.dipole_factor) <= 4e-16);
        CHECK(m.delta0 >= e.config.delta0_min);
        CHECK(m.delta0 <= e.config.delta0_max);
        CHECK(std::abs(m.detuning_hz) <= 0.5 * e.config.bandwidth);
        CHECK(m.theta >= 0.0);
        CHECK(m.theta <= 0.5 * kPi);
    }
}

TEST_CASE("bulk validation preset carries the published parameters") {
    const EnsembleConfig c = bulk_validation_config();
    CHECK(c.volume == 6.4e-15);
    CHECK(c.n_tls == 10000);
    CHECK(c.p0 == 5e43);
    CHECK(c.bandwidth == 1e7);
    CHECK(c.delta0_min == 0.01);
    CHECK(bulk_validation_config(0).omega_rabi_max == 87e3);
    CHECK(bulk_validation_config(1).omega_rabi_max == 870e3);
    CHECK_THROWS_AS(bulk_validation_config(2), ConfigError);
}

TEST_CASE("config validation rejects broken inputs") {
    EnsembleConfig c;
    c.delta0_min = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = EnsembleConfig{};
    c.delta0_min = 0.5;
    c.delta0_max = 0.2;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = EnsembleConfig{};
    c.n_tls = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = EnsembleConfig{};
    c.t1_min = -1.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("ensemble CSV carries config, seed and one row per TLS") {
    EnsembleConfig c;
    c.n_tls = 7;
    c.seed = 4242;
    const TlsEnsemble e = sample_ensemble(c);
    std::ostringstream out;
    write_ensemble_csv(e, out);
    const std::string text = out.str();
    CHECK(text.find("seed = 4242") != std::string::npos);
    CHECK(text.find("delta0,dipole_factor,theta,detuning_hz,t1_s,omega_hz") != std::string::npos);
    CHECK(text.find("expected_tls_count") != std::string::npos);
    // 5 comment lines + header + 7 rows
    const std::size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == 13);
}
