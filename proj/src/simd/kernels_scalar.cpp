// Reference kernels. The lane structure mirrors the vector variants exactly;
// see the ordering contract in kernels.hpp.

#include "vaxcast/simd/kernels.hpp"

namespace vaxcast::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        l0 = l0 + a[i] * b[i];
        l1 = l1 + a[i + 1] * b[i + 1];
        l2 = l2 + a[i + 2] * b[i + 2];
        l3 = l3 + a[i + 3] * b[i + 3];
    }
    double acc = (l0 + l1) + (l2 + l3);
    for (std::size_t i = body; i < n; ++i) acc = acc + a[i] * b[i];
    return acc;
}

double sum(const double* a, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        l0 = l0 + a[i];
        l1 = l1 + a[i + 1];
        l2 = l2 + a[i + 2];
        l3 = l3 + a[i + 3];
    }
    double acc = (l0 + l1) + (l2 + l3);
    for (std::size_t i = body; i < n; ++i) acc = acc + a[i];
    return acc;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    double l[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double d = a[i + j] - b[i + j];
            l[j] = l[j] + d * d;
        }
    }
    double acc = (l[0] + l[1]) + (l[2] + l[3]);
    for (std::size_t i = body; i < n; ++i) {
        const double d = a[i] - b[i];
        acc = acc + d * d;
    }
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

}  // namespace vaxcast::simd::scalar
