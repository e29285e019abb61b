#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace tlsgap {

// Adaptive Gauss-Kronrod 7-15 on [a, b]. Splits at user-supplied break
// points first (tabulated integrands are only piecewise smooth), then
// bisects until the embedded error estimate meets the tolerance.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-10, double abs_tol = 1e-14,
                    const std::vector<double>* break_points = nullptr);

} // namespace tlsgap
