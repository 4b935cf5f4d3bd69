#include <cstdlib>
#include <string_view>

#include "vaxcast/simd/kernels.hpp"

namespace vaxcast::simd {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::dot, &scalar::sum, &scalar::sq_dist, &scalar::axpy};
#if defined(VAXCAST_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::dot, &avx2::sum, &avx2::sq_dist, &avx2::axpy};
#endif
#if defined(VAXCAST_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, &neon::dot, &neon::sum, &neon::sq_dist, &neon::axpy};
#endif

const KernelTable& select() noexcept {
    Isa best = Isa::scalar;
    if (isa_available(Isa::avx2)) best = Isa::avx2;
    if (isa_available(Isa::neon)) best = Isa::neon;
    if (const char* pinned = std::getenv("VAXCAST_SIMD")) {
        const std::string_view v{pinned};
        if (v == "scalar") best = Isa::scalar;
        else if (v == "avx2" && isa_available(Isa::avx2)) best = Isa::avx2;
        else if (v == "neon" && isa_available(Isa::neon)) best = Isa::neon;
    }
    return kernels_for(best);
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
        case Isa::scalar: break;
    }
    return "scalar";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(VAXCAST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(VAXCAST_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) noexcept {
    if (!isa_available(isa)) return kScalar;
    switch (isa) {
#if defined(VAXCAST_HAVE_AVX2)
        case Isa::avx2: return kAvx2;
#endif
#if defined(VAXCAST_HAVE_NEON)
        case Isa::neon: return kNeon;
#endif
        default: return kScalar;
    }
}

const KernelTable& kernels() noexcept {
    static const KernelTable& table = select();
    return table;
}

}  // namespace vaxcast::simd
