#include "tlsgap/kernels/arrowhead.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

namespace tlsgap::kernels {

ArrowheadApplyFn arrowhead_apply = arrowhead_apply_scalar;
LincombFn lincomb = lincomb_scalar;
ErrorNormFn error_norm = error_norm_scalar;

namespace {

std::string g_active = "scalar";
std::once_flag g_init_flag;

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void bind(const std::string& name) {
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2") {
        arrowhead_apply = arrowhead_apply_avx2;
        lincomb = lincomb_avx2;
        error_norm = error_norm_avx2;
        g_active = "avx2";
        return;
    }
#endif
    if (name == "scalar") {
        arrowhead_apply = arrowhead_apply_scalar;
        lincomb = lincomb_scalar;
        error_norm = error_norm_scalar;
        g_active = "scalar";
        return;
    }
    throw std::invalid_argument("unknown or unavailable kernel set: " + name);
}

void init_once() {
    std::string choice = "auto";
    if (const char* env = std::getenv("TLSGAP_SIMD")) choice = env;
    if (choice == "auto") choice = avx2_available() ? "avx2" : "scalar";
    bind(choice);
}

struct Init {
    Init() { std::call_once(g_init_flag, init_once); }
} g_init;

} // namespace

const std::string& active_kernel_set() {
    std::call_once(g_init_flag, init_once);
    return g_active;
}

void select_kernel_set(const std::string& name) {
    std::call_once(g_init_flag, init_once);
    if (name == "auto") {
        bind(avx2_available() ? "avx2" : "scalar");
        return;
    }
    if (name == "avx2" && !avx2_available())
        throw std::invalid_argument("avx2 kernels requested but CPU lacks avx2/fma");
    bind(name);
}

} // namespace tlsgap::kernels
