#include <immintrin.h>

#include "robstaff/kernels.hpp"

namespace robstaff::kernels::avx2 {

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
    }
    for (; i < n; ++i) {
        const double p = a * x[i];
        y[i] = y[i] + p;
    }
}

void scale(double a, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), va));
    for (; i < n; ++i) y[i] *= a;
}

void vmin(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    // minpd returns its first operand when it compares less, matching the scalar ternary
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_min_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] = x[i] < y[i] ? x[i] : y[i];
}

}  // namespace robstaff::kernels::avx2
