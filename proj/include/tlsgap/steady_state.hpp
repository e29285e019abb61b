#pragma once

namespace tlsgap {

// Continuous-wave TLS loss: saturable loss tangent with a strong-field
// crossover at e_c. E_c is proportional to 1/sqrt(T1 T2); with T2 locked to
// t2_over_t1 * T1 a lifetime change rescales e_c alone.
struct LossModel {
    double tan_delta0 = 2e-3; // intrinsic (weak-field) loss tangent
    double e_c = 1.0;         // V/m, strong-field crossover
    double t2_over_t1 = 2.0;  // low-temperature limit T2 = 2 T1
};

void validate(const LossModel& model);

// tan_delta0 / sqrt(1 + (e_ac/e_c)^2)
double loss_tangent(const LossModel& model, double e_ac);

// TLS lifetimes scaled by t1_factor shift saturation to lower fields:
// e_c -> e_c / t1_factor, tan_delta0 unchanged. t1_factor < 1 needs the
// explicit allow_degradation flag.
LossModel rescale_for_gap(const LossModel& model, double t1_factor,
                          bool allow_degradation = false);

// Q = 1 / (participation * tan_delta).
double quality_factor_from_loss(double tan_delta, double participation);

} // namespace tlsgap
