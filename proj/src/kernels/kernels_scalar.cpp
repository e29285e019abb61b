#include "tlsgap/kernels/arrowhead.hpp"

#include <cmath>

namespace tlsgap::kernels {

void arrowhead_apply_scalar(std::size_t n, const double* xr, const double* xi,
                            const double* dr, const double* di, const double* g,
                            double xq_re, double xq_im, double* yr, double* yi,
                            double* sum_re, double* sum_im) {
    double sr = 0.0, si = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        // y_j = (dr + i di) x_j - i g x_q
        yr[j] = dr[j] * xr[j] - di[j] * xi[j] + g[j] * xq_im;
        yi[j] = dr[j] * xi[j] + di[j] * xr[j] - g[j] * xq_re;
        sr += g[j] * xr[j];
        si += g[j] * xi[j];
    }
    *sum_re = sr;
    *sum_im = si;
}

void lincomb_scalar(std::size_t n, double* y, const double* x, double h,
                    std::size_t n_terms, const double* coef,
                    const double* const* stages) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_terms; ++k) acc += coef[k] * stages[k][i];
        y[i] = x[i] + h * acc;
    }
}

double error_norm_scalar(std::size_t n, const double* err, const double* y0,
                         const double* y1, double atol, double rtol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double scale =
            atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / scale;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

} // namespace tlsgap::kernels
