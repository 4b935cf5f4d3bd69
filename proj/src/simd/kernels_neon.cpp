// NEON variants: two float64x2 registers hold lanes {0,1} and {2,3}.

#include <arm_neon.h>

#include "vaxcast/simd/kernels.hpp"

namespace vaxcast::simd::neon {

namespace {

inline double reduce_lanes(float64x2_t lo, float64x2_t hi) {
    return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
           (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double out = reduce_lanes(lo, hi);
    for (std::size_t i = body; i < n; ++i) out = out + a[i] * b[i];
    return out;
}

double sum(const double* a, std::size_t n) {
    float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        lo = vaddq_f64(lo, vld1q_f64(a + i));
        hi = vaddq_f64(hi, vld1q_f64(a + i + 2));
    }
    double out = reduce_lanes(lo, hi);
    for (std::size_t i = body; i < n; ++i) out = out + a[i];
    return out;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        lo = vaddq_f64(lo, vmulq_f64(d0, d0));
        hi = vaddq_f64(hi, vmulq_f64(d1, d1));
    }
    double out = reduce_lanes(lo, hi);
    for (std::size_t i = body; i < n; ++i) {
        const double d = a[i] - b[i];
        out = out + d * d;
    }
    return out;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    const std::size_t body = n & ~std::size_t{1};
    for (std::size_t i = 0; i < body; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (std::size_t i = body; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

}  // namespace vaxcast::simd::neon
