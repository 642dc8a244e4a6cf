#include "fvv/kernels/kernels.hpp"

#include <cstdlib>
#include <string>

namespace fvv::kernels {

const KernelTable* avx2_table() {
#if defined(__x86_64__) || defined(__i386__)
    static const bool usable = detail::avx2_compiled() && __builtin_cpu_supports("avx2") &&
                               __builtin_cpu_supports("fma");
    return usable ? &detail::make_avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        if (const char* env = std::getenv("FVV_SIMD")) {
            if (std::string(env) == "scalar") return &scalar_table();
        }
        const KernelTable* fast = avx2_table();
        return fast ? fast : &scalar_table();
    }();
    return *chosen;
}

std::string_view level_name(SimdLevel level) {
    switch (level) {
        case SimdLevel::Scalar: return "scalar";
        case SimdLevel::Avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace fvv::kernels
