#include "tlsgap/steady_state.hpp"

#include <cmath>
#include <stdexcept>

#include "tlsgap/errors.hpp"

namespace tlsgap {

void validate(const LossModel& model) {
    if (!(model.tan_delta0 > 0)) throw ConfigError("loss model: tan_delta0 must be positive");
    if (!(model.e_c > 0)) throw ConfigError("loss model: e_c must be positive");
    if (!(model.t2_over_t1 > 0 && model.t2_over_t1 <= 2.0))
        throw ConfigError("loss model: t2_over_t1 must be in (0, 2]");
}

double loss_tangent(const LossModel& model, double e_ac) {
    validate(model);
    if (e_ac < 0) throw std::domain_error("loss_tangent: field must be >= 0");
    const double x = e_ac / model.e_c;
    return model.tan_delta0 / std::sqrt(1.0 + x * x);
}

LossModel rescale_for_gap(const LossModel& model, double t1_factor,
                          bool allow_degradation) {
    validate(model);
    if (t1_factor < 1.0 && !allow_degradation)
        throw std::domain_error(
            "rescale_for_gap: t1_factor < 1 degrades the device; pass "
            "allow_degradation to model it anyway");
    if (!(t1_factor > 0))
        throw std::domain_error("rescale_for_gap: t1_factor must be positive");
    LossModel scaled = model;
    // E_c ~ 1/sqrt(T1 T2) with T2 = t2_over_t1 * T1, so E_c ~ 1/T1.
    scaled.e_c = model.e_c / t1_factor;
    return scaled;
}

double quality_factor_from_loss(double tan_delta, double participation) {
    if (!(tan_delta > 0 && tan_delta <= 1.0))
        throw std::domain_error("quality_factor_from_loss: tan_delta must be in (0, 1]");
    if (!(participation > 0 && participation <= 1.0))
        throw std::domain_error("quality_factor_from_loss: participation must be in (0, 1]");
    return 1.0 / (participation * tan_delta);
}

} // namespace tlsgap
