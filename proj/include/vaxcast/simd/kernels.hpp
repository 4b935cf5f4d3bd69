#pragma once

// Vector kernels behind the numeric inner loops (autocovariances, coordinate
// descent, Kalman covariance updates, error sums).
//
// Every variant reduces in the same order: four lane accumulators where lane j
// takes elements i with i % 4 == j over the largest multiple-of-4 prefix, then
// (l0 + l1) + (l2 + l3), then the tail added left to right. Multiplies and
// adds are never fused. Scalar, AVX2 and NEON results are therefore
// bit-identical, which keeps golden outputs independent of the host CPU.

#include <cstddef>
#include <span>
#include <string_view>

namespace vaxcast::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    double (*sq_dist)(const double* a, const double* b, std::size_t n);
    /// y[i] = y[i] + alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

/// True when the variant is compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Table for a specific variant; falls back to scalar when unavailable.
const KernelTable& kernels_for(Isa isa) noexcept;

/// Best available variant, chosen once. `VAXCAST_SIMD=scalar|avx2|neon`
/// pins the choice (ignored when the requested variant is unavailable).
const KernelTable& kernels() noexcept;

inline Isa active_isa() noexcept { return kernels().isa; }

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return kernels().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double sum(std::span<const double> a) noexcept { return kernels().sum(a.data(), a.size()); }

inline double sq_dist(std::span<const double> a, std::span<const double> b) noexcept {
    return kernels().sq_dist(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    kernels().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(VAXCAST_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(VAXCAST_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sq_dist(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace vaxcast::simd
