// AVX2 variants. Built with -mavx2 only (no -mfma) so mul/add stay unfused.

#include <immintrin.h>

#include "vaxcast/simd/kernels.hpp"

namespace vaxcast::simd::avx2 {

namespace {

inline double reduce_lanes(__m256d acc) {
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    return (l[0] + l[1]) + (l[2] + l[3]);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double out = reduce_lanes(acc);
    for (std::size_t i = body; i < n; ++i) out = out + a[i] * b[i];
    return out;
}

double sum(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double out = reduce_lanes(acc);
    for (std::size_t i = body; i < n; ++i) out = out + a[i];
    return out;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double out = reduce_lanes(acc);
    for (std::size_t i = body; i < n; ++i) {
        const double d = a[i] - b[i];
        out = out + d * d;
    }
    return out;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, r);
    }
    for (std::size_t i = body; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

}  // namespace vaxcast::simd::avx2
