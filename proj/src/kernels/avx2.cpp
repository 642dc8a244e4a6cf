#include "fvv/kernels/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#define FVV_HAVE_AVX2 1
#include <immintrin.h>
#endif

#include <algorithm>
#include <cmath>
#include <vector>

namespace fvv::kernels::detail {

#ifdef FVV_HAVE_AVX2
namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Interleaved layout: one register holds two complex numbers (re, im, re, im).
std::complex<double> complex_dot_avx2(const std::complex<double>* x,
                                      const std::complex<double>* y, std::size_t n) {
    const double* a = reinterpret_cast<const double*>(x);
    const double* b = reinterpret_cast<const double*>(y);
    __m256d same0 = _mm256_setzero_pd(), cross0 = _mm256_setzero_pd();
    __m256d same1 = _mm256_setzero_pd(), cross1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a0 = _mm256_loadu_pd(a + 2 * i);
        const __m256d b0 = _mm256_loadu_pd(b + 2 * i);
        const __m256d a1 = _mm256_loadu_pd(a + 2 * i + 4);
        const __m256d b1 = _mm256_loadu_pd(b + 2 * i + 4);
        same0 = _mm256_fmadd_pd(a0, b0, same0);
        cross0 = _mm256_fmadd_pd(a0, _mm256_permute_pd(b0, 0b0101), cross0);
        same1 = _mm256_fmadd_pd(a1, b1, same1);
        cross1 = _mm256_fmadd_pd(a1, _mm256_permute_pd(b1, 0b0101), cross1);
    }
    const __m256d same = _mm256_add_pd(same0, same1);
    const __m256d cross = _mm256_add_pd(cross0, cross1);
    alignas(32) double s[4], c[4];
    _mm256_store_pd(s, same);
    _mm256_store_pd(c, cross);
    double re = (s[0] - s[1]) + (s[2] - s[3]);
    double im = (c[0] + c[1]) + (c[2] + c[3]);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
    return {re, im};
}

// Four observation points per register; accumulators for one block of
// harmonics stay in L1.
void nonuniform_dft_avx2(const double* t, const double* w, std::size_t n, int k_lo,
                         std::size_t n_k, std::complex<double>* out) {
    for (std::size_t k = 0; k < n_k; ++k) out[k] = 0.0;
    if (n == 0 || n_k == 0) return;

    std::vector<double> step_re(n), step_im(n);
    for (std::size_t i = 0; i < n; ++i) {
        step_re[i] = std::cos(t[i]);
        step_im[i] = -std::sin(t[i]);
    }
    const std::size_t n4 = n - n % 4;
    alignas(32) double base_re[4], base_im[4];
    alignas(32) double acc_re[4 * kResync];
    alignas(32) double acc_im[4 * kResync];

    for (std::size_t k0 = 0; k0 < n_k; k0 += kResync) {
        const std::size_t nb = std::min(kResync, n_k - k0);
        std::fill(std::begin(acc_re), std::end(acc_re), 0.0);
        std::fill(std::begin(acc_im), std::end(acc_im), 0.0);
        const double kb = static_cast<double>(k_lo) + static_cast<double>(k0);
        for (std::size_t i = 0; i < n4; i += 4) {
            for (int l = 0; l < 4; ++l) {
                base_re[l] = std::cos(kb * t[i + l]) * w[i + l];
                base_im[l] = -std::sin(kb * t[i + l]) * w[i + l];
            }
            __m256d pr = _mm256_load_pd(base_re);
            __m256d pi = _mm256_load_pd(base_im);
            const __m256d sr = _mm256_loadu_pd(step_re.data() + i);
            const __m256d si = _mm256_loadu_pd(step_im.data() + i);
            for (std::size_t j = 0; j < nb; ++j) {
                double* ar = acc_re + 4 * j;
                double* ai = acc_im + 4 * j;
                _mm256_store_pd(ar, _mm256_add_pd(_mm256_load_pd(ar), pr));
                _mm256_store_pd(ai, _mm256_add_pd(_mm256_load_pd(ai), pi));
                const __m256d nr = _mm256_fmsub_pd(pr, sr, _mm256_mul_pd(pi, si));
                pi = _mm256_fmadd_pd(pr, si, _mm256_mul_pd(pi, sr));
                pr = nr;
            }
        }
        for (std::size_t j = 0; j < nb; ++j) out[k0 + j] = {hsum(_mm256_load_pd(acc_re + 4 * j)),
                                                         hsum(_mm256_load_pd(acc_im + 4 * j))};
        for (std::size_t i = n4; i < n; ++i) {
            double pr = std::cos(kb * t[i]) * w[i];
            double pi = -std::sin(kb * t[i]) * w[i];
            for (std::size_t j = 0; j < nb; ++j) {
                out[k0 + j] += std::complex<double>(pr, pi);
                const double nr = pr * step_re[i] - pi * step_im[i];
                pi = pr * step_im[i] + pi * step_re[i];
                pr = nr;
            }
        }
    }
}

const KernelTable kAvx2{SimdLevel::Avx2, "avx2", &complex_dot_avx2, &nonuniform_dft_avx2};

}  // namespace

const KernelTable& make_avx2_table() { return kAvx2; }
bool avx2_compiled() { return true; }

#else

const KernelTable& make_avx2_table() { return scalar_table(); }
bool avx2_compiled() { return false; }

#endif

}  // namespace fvv::kernels::detail
