#include <cstdlib>
#include <cstring>

#include "robstaff/kernels.hpp"

namespace robstaff::kernels {

namespace generic {

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double p = a * x[i];
        y[i] = y[i] + p;
    }
}

void scale(double a, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void vmin(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] < y[i] ? x[i] : y[i];
}

}  // namespace generic

const Backend& scalar_backend() {
    static const Backend b{"scalar", generic::axpy, generic::scale, generic::vmin};
    return b;
}

const Backend* avx2_backend() {
#if defined(ROBSTAFF_HAVE_AVX2)
    static const Backend b{"avx2", avx2::axpy, avx2::scale, avx2::vmin};
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &b : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const Backend* pick() {
    const char* env = std::getenv("ROBSTAFF_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_backend();
    if (const Backend* b = avx2_backend()) return b;
    return &scalar_backend();
}

const Backend*& slot() {
    static const Backend* current = pick();
    return current;
}

}  // namespace

const Backend& active() { return *slot(); }

void set_active(const Backend& backend) { slot() = &backend; }

}  // namespace robstaff::kernels
