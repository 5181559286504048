#pragma once

#include <cstddef>
#include <string_view>

// Dense vector kernels behind the simplex pivot and the MDP backups.
// Every variant is exact elementwise IEEE arithmetic without fused
// multiply-add, so scalar and SIMD results agree bit for bit.
namespace robstaff::kernels {

// y[i] += a * x[i]
using AxpyFn = void (*)(double a, const double* x, double* y, std::size_t n);
// y[i] *= a
using ScaleFn = void (*)(double a, double* y, std::size_t n);
// y[i] = min(y[i], x[i])
using MinFn = void (*)(const double* x, double* y, std::size_t n);

struct Backend {
    std::string_view name;
    AxpyFn axpy;
    ScaleFn scale;
    MinFn vmin;
};

namespace generic {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
void vmin(const double* x, double* y, std::size_t n);
}  // namespace generic

#if defined(ROBSTAFF_HAVE_AVX2)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
void vmin(const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

const Backend& scalar_backend();
// nullptr when the binary or the CPU lacks AVX2
const Backend* avx2_backend();

// chosen once from CPU support; ROBSTAFF_SIMD=scalar forces the reference path
const Backend& active();
void set_active(const Backend& backend);

}  // namespace robstaff::kernels
