#include "qmse/kernels.hpp"

#include <cstdlib>
#include <string>

namespace qmse::kern {

#if QMSE_AVX2_BUILD
const Kernels* avx2_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#if QMSE_AVX2_BUILD
    static const bool ok =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? avx2_kernels_impl() : nullptr;
#else
    return nullptr;
#endif
}

const Kernels& active() {
    static const Kernels& chosen = []() -> const Kernels& {
        const char* env = std::getenv("QMSE_SIMD");
        std::string mode = env ? env : "auto";
        if (mode == "scalar") return scalar_kernels();
        const Kernels* simd = avx2_kernels();
        if (simd && (mode == "auto" || mode == "avx2")) return *simd;
        return scalar_kernels();
    }();
    return chosen;
}

} // namespace qmse::kern
