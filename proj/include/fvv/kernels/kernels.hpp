#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace fvv::kernels {

enum class SimdLevel { Scalar, Avx2 };

/// Hot loops with one entry per instruction set.
struct KernelTable {
    SimdLevel level;
    const char* name;

    /// sum_i x[i] * y[i] over n complex values, no conjugation.
    std::complex<double> (*complex_dot)(const std::complex<double>* x,
                                        const std::complex<double>* y, std::size_t n);

    /// out[k] = sum_i w[i] * exp(-1i * (k_lo + k) * t[i]) for k in [0, n_k).
    void (*nonuniform_dft)(const double* t, const double* w, std::size_t n, int k_lo,
                           std::size_t n_k, std::complex<double>* out);
};

const KernelTable& scalar_table();

/// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_table();

/// Best table for this CPU. FVV_SIMD=scalar forces the reference path.
const KernelTable& active();

std::string_view level_name(SimdLevel level);

namespace detail {
// Exact phasors are recomputed every kResync harmonics to bound recurrence drift.
inline constexpr std::size_t kResync = 64;

const KernelTable& make_avx2_table();
bool avx2_compiled();
}  // namespace detail

}  // namespace fvv::kernels
