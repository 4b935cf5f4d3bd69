#include <doctest.h>

#include <bit>
#include <cstdlib>
#include <string>
#include <vector>

#include "vaxcast/random.hpp"
#include "vaxcast/simd/kernels.hpp"

using namespace vaxcast;

namespace {

std::vector<double> random_values(Rng& rng, std::size_t n, double scale) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

// Four-lane reference written from the documented reduction order.
double lane_sum(const std::vector<double>& terms) {
    const std::size_t n = terms.size(), body = n - n % 4;
    double lane[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < body; ++i) lane[i % 4] += terms[i];
    double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (std::size_t i = body; i < n; ++i) s += terms[i];
    return s;
}

void require_same_bits(double a, double b) { CHECK(std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b)); }

}  // namespace

TEST_CASE("scalar kernels follow the four-lane reduction order") {
    Rng rng(7);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 64u, 101u}) {
        const auto a = random_values(rng, n, 1e3), b = random_values(rng, n, 1e-2);
        std::vector<double> prod(n), diff2(n);
        for (std::size_t i = 0; i < n; ++i) {
            prod[i] = a[i] * b[i];
            diff2[i] = (a[i] - b[i]) * (a[i] - b[i]);
        }
        require_same_bits(simd::scalar::dot(a.data(), b.data(), n), lane_sum(prod));
        require_same_bits(simd::scalar::sum(a.data(), n), lane_sum(a));
        require_same_bits(simd::scalar::sq_dist(a.data(), b.data(), n), lane_sum(diff2));
    }
}

TEST_CASE("every available variant is bit-identical to the scalar kernels") {
    Rng rng(11);
    for (const auto isa : {simd::Isa::avx2, simd::Isa::neon}) {
        if (!simd::isa_available(isa)) continue;
        const auto& k = simd::kernels_for(isa);
        REQUIRE(k.isa == isa);
        for (std::size_t n = 0; n < 200; n += (n < 20 ? 1 : 17)) {
            const auto a = random_values(rng, n, 1e6), b = random_values(rng, n, 1e-3);
            require_same_bits(k.dot(a.data(), b.data(), n), simd::scalar::dot(a.data(), b.data(), n));
            require_same_bits(k.sum(a.data(), n), simd::scalar::sum(a.data(), n));
            require_same_bits(k.sq_dist(a.data(), b.data(), n), simd::scalar::sq_dist(a.data(), b.data(), n));
            auto y1 = b, y2 = b;
            k.axpy(0.37, a.data(), y1.data(), n);
            simd::scalar::axpy(0.37, a.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) require_same_bits(y1[i], y2[i]);
        }
    }
}

TEST_CASE("an unavailable variant falls back to scalar") {
    for (const auto isa : {simd::Isa::avx2, simd::Isa::neon}) {
        if (simd::isa_available(isa)) continue;
        CHECK(simd::kernels_for(isa).isa == simd::Isa::scalar);
    }
}

TEST_CASE("the environment pin is honoured") {
    const char* pin = std::getenv("VAXCAST_SIMD");
    if (pin && std::string(pin) == "scalar") {
        CHECK(simd::active_isa() == simd::Isa::scalar);
    } else {
        CHECK(simd::isa_available(simd::active_isa()));
    }
}

TEST_CASE("span wrappers clip to the shorter input") {
    const std::vector<double> a{1, 2, 3, 4, 5}, b{1, 1, 1};
    CHECK(simd::dot(a, b) == 6.0);
    CHECK(simd::sq_dist(a, b) == 0.0 + 1.0 + 4.0);
    std::vector<double> y{0, 0};
    simd::axpy(2.0, a, y);
    CHECK(y == std::vector<double>{2, 4});
}
