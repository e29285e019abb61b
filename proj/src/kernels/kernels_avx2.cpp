// AVX2 + FMA variants of the inner-loop kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; it must not be entered unless the CPU
// reports both features (dispatch.cpp checks).

#if defined(__x86_64__) || defined(_M_X64)

#include "tlsgap/kernels/arrowhead.hpp"

#include <cmath>
#include <immintrin.h>

namespace tlsgap::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

} // namespace

void arrowhead_apply_avx2(std::size_t n, const double* xr, const double* xi,
                          const double* dr, const double* di, const double* g,
                          double xq_re, double xq_im, double* yr, double* yi,
                          double* sum_re, double* sum_im) {
    const __m256d vqr = _mm256_set1_pd(xq_re);
    const __m256d vqi = _mm256_set1_pd(xq_im);
    __m256d acc_r = _mm256_setzero_pd();
    __m256d acc_i = _mm256_setzero_pd();

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d vxr = _mm256_loadu_pd(xr + j);
        const __m256d vxi = _mm256_loadu_pd(xi + j);
        const __m256d vdr = _mm256_loadu_pd(dr + j);
        const __m256d vdi = _mm256_loadu_pd(di + j);
        const __m256d vg = _mm256_loadu_pd(g + j);

        // yr = dr*xr - di*xi + g*xq_im
        __m256d t = _mm256_fmadd_pd(vg, vqi, _mm256_mul_pd(vdr, vxr));
        t = _mm256_fnmadd_pd(vdi, vxi, t);
        _mm256_storeu_pd(yr + j, t);

        // yi = dr*xi + di*xr - g*xq_re
        t = _mm256_fmadd_pd(vdi, vxr, _mm256_mul_pd(vdr, vxi));
        t = _mm256_fnmadd_pd(vg, vqr, t);
        _mm256_storeu_pd(yi + j, t);

        acc_r = _mm256_fmadd_pd(vg, vxr, acc_r);
        acc_i = _mm256_fmadd_pd(vg, vxi, acc_i);
    }

    double sr = hsum(acc_r), si = hsum(acc_i);
    for (; j < n; ++j) {
        yr[j] = dr[j] * xr[j] - di[j] * xi[j] + g[j] * xq_im;
        yi[j] = dr[j] * xi[j] + di[j] * xr[j] - g[j] * xq_re;
        sr += g[j] * xr[j];
        si += g[j] * xi[j];
    }
    *sum_re = sr;
    *sum_im = si;
}

void lincomb_avx2(std::size_t n, double* y, const double* x, double h,
                  std::size_t n_terms, const double* coef,
                  const double* const* stages) {
    const __m256d vh = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t k = 0; k < n_terms; ++k) {
            acc = _mm256_fmadd_pd(_mm256_set1_pd(coef[k]),
                                  _mm256_loadu_pd(stages[k] + i), acc);
        }
        _mm256_storeu_pd(y + i,
                         _mm256_fmadd_pd(vh, acc, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_terms; ++k) acc += coef[k] * stages[k][i];
        y[i] = x[i] + h * acc;
    }
}

double error_norm_avx2(std::size_t n, const double* err, const double* y0,
                       const double* y1, double atol, double rtol) {
    const __m256d vatol = _mm256_set1_pd(atol);
    const __m256d vrtol = _mm256_set1_pd(rtol);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a0 = _mm256_and_pd(_mm256_loadu_pd(y0 + i), abs_mask);
        const __m256d a1 = _mm256_and_pd(_mm256_loadu_pd(y1 + i), abs_mask);
        const __m256d scale =
            _mm256_fmadd_pd(vrtol, _mm256_max_pd(a0, a1), vatol);
        const __m256d q = _mm256_div_pd(_mm256_loadu_pd(err + i), scale);
        acc = _mm256_fmadd_pd(q, q, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double scale =
            atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / scale;
        s += q * q;
    }
    return std::sqrt(s / static_cast<double>(n));
}

} // namespace tlsgap::kernels

#endif // x86_64
