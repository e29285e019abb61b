#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops for the one-excitation propagator, in split
// complex layout (separate re/im arrays). A scalar reference version and an
// AVX2 version of each kernel are built; the active set is chosen once at
// startup from CPU features and can be overridden with TLSGAP_SIMD=scalar.
//
// All variants of a kernel compute the same sums in the same order up to
// floating-point reassociation; equivalence is enforced by tests/test_kernels.

namespace tlsgap::kernels {

// Arrowhead generator application, y = -i H_eff x restricted to the TLS block:
//   y_j   = (dr_j + i di_j) x_j - i g_j x_q        j = 0..n-1
//   sum   = sum_j g_j x_j                          (returned for the hub row)
// dr, di hold the complex diagonal (-gamma_j/2, -delta_j) and g the real
// exchange elements, all in angular units.
using ArrowheadApplyFn = void (*)(std::size_t n,
                                  const double* xr, const double* xi,
                                  const double* dr, const double* di,
                                  const double* g,
                                  double xq_re, double xq_im,
                                  double* yr, double* yi,
                                  double* sum_re, double* sum_im);

// Runge-Kutta stage combination: y_i = x_i + h * sum_k coef[k] * stage[k][i].
using LincombFn = void (*)(std::size_t n, double* y, const double* x, double h,
                           std::size_t n_terms, const double* coef,
                           const double* const* stages);

// Weighted RMS error norm used by the step controller:
//   sqrt(mean_i (err_i / (atol + rtol * max(|y0_i|, |y1_i|)))^2)
using ErrorNormFn = double (*)(std::size_t n, const double* err,
                               const double* y0, const double* y1,
                               double atol, double rtol);

extern ArrowheadApplyFn arrowhead_apply;
extern LincombFn lincomb;
extern ErrorNormFn error_norm;

// Scalar reference implementations, always available (used directly by the
// equivalence tests).
void arrowhead_apply_scalar(std::size_t n, const double* xr, const double* xi,
                            const double* dr, const double* di, const double* g,
                            double xq_re, double xq_im, double* yr, double* yi,
                            double* sum_re, double* sum_im);
void lincomb_scalar(std::size_t n, double* y, const double* x, double h,
                    std::size_t n_terms, const double* coef,
                    const double* const* stages);
double error_norm_scalar(std::size_t n, const double* err, const double* y0,
                         const double* y1, double atol, double rtol);

#if defined(__x86_64__) || defined(_M_X64)
void arrowhead_apply_avx2(std::size_t n, const double* xr, const double* xi,
                          const double* dr, const double* di, const double* g,
                          double xq_re, double xq_im, double* yr, double* yi,
                          double* sum_re, double* sum_im);
void lincomb_avx2(std::size_t n, double* y, const double* x, double h,
                  std::size_t n_terms, const double* coef,
                  const double* const* stages);
double error_norm_avx2(std::size_t n, const double* err, const double* y0,
                       const double* y1, double atol, double rtol);
#endif

// Name of the kernel set in use ("scalar" or "avx2"); recorded in manifests.
const std::string& active_kernel_set();

// Rebind the dispatch table; accepts "scalar", "avx2" or "auto". Throws
// std::invalid_argument for unknown names or unavailable sets. Intended for
// tests; normal startup resolves once from cpuid and TLSGAP_SIMD.
void select_kernel_set(const std::string& name);

} // namespace tlsgap::kernels
