#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "robstaff/kernels.hpp"

using namespace robstaff::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> noise(std::mt19937_64& rng, size_t n) {
    std::normal_distribution<double> g(0.0, 10.0);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernels") {
    std::vector<double> y{1.0, 2.0, 3.0};
    const std::vector<double> x{1.0, -1.0, 0.5};
    generic::axpy(2.0, x.data(), y.data(), 3);
    CHECK(y == std::vector<double>{3.0, 0.0, 4.0});
    generic::scale(0.5, y.data(), 3);
    CHECK(y == std::vector<double>{1.5, 0.0, 2.0});
    generic::vmin(x.data(), y.data(), 3);
    CHECK(y == std::vector<double>{1.0, -1.0, 0.5});
}

TEST_CASE("avx2 kernels match scalar bit for bit") {
    const Backend* simd = avx2_backend();
    if (!simd) {
        MESSAGE("AVX2 unavailable; only the scalar path is exercised");
        return;
    }
    const Backend& ref = scalar_backend();
    std::mt19937_64 rng(42);
    for (size_t n = 0; n < 67; ++n) {
        for (size_t offset : {0u, 1u, 3u}) {
            const auto x = noise(rng, n + offset), y0 = noise(rng, n + offset);
            const double a = std::normal_distribution<double>(0.0, 3.0)(rng);
            auto y1 = y0, y2 = y0;
            ref.axpy(a, x.data() + offset, y1.data() + offset, n);
            simd->axpy(a, x.data() + offset, y2.data() + offset, n);
            CHECK(same_bits(y1, y2));
            ref.scale(a, y1.data() + offset, n);
            simd->scale(a, y2.data() + offset, n);
            CHECK(same_bits(y1, y2));
            ref.vmin(x.data() + offset, y1.data() + offset, n);
            simd->vmin(x.data() + offset, y2.data() + offset, n);
            CHECK(same_bits(y1, y2));
        }
    }
}

TEST_CASE("active backend can be switched") {
    const Backend& before = active();
    set_active(scalar_backend());
    CHECK(active().name == scalar_backend().name);
    set_active(before);
}
