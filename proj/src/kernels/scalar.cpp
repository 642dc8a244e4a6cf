#include "fvv/kernels/kernels.hpp"

#include <cmath>
#include <vector>

namespace fvv::kernels {
namespace {

std::complex<double> complex_dot_scalar(const std::complex<double>* x,
                                        const std::complex<double>* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = x[i].real(), ai = x[i].imag();
        const double br = y[i].real(), bi = y[i].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

void nonuniform_dft_scalar(const double* t, const double* w, std::size_t n, int k_lo,
                           std::size_t n_k, std::complex<double>* out) {
    for (std::size_t k = 0; k < n_k; ++k) out[k] = 0.0;
    if (n == 0 || n_k == 0) return;

    // Blocks of harmonics share one exact phasor per point, advanced by
    // the unit step exp(-i t) inside the block.
    std::vector<double> acc_re(detail::kResync), acc_im(detail::kResync);
    for (std::size_t k0 = 0; k0 < n_k; k0 += detail::kResync) {
        const std::size_t nb = std::min(detail::kResync, n_k - k0);
        std::fill(acc_re.begin(), acc_re.end(), 0.0);
        std::fill(acc_im.begin(), acc_im.end(), 0.0);
        const double kb = static_cast<double>(k_lo) + static_cast<double>(k0);
        for (std::size_t i = 0; i < n; ++i) {
            double pr = std::cos(kb * t[i]) * w[i];
            double pi = -std::sin(kb * t[i]) * w[i];
            const double sr = std::cos(t[i]), si = -std::sin(t[i]);
            for (std::size_t j = 0; j < nb; ++j) {
                acc_re[j] += pr;
                acc_im[j] += pi;
                const double nr = pr * sr - pi * si;
                pi = pr * si + pi * sr;
                pr = nr;
            }
        }
        for (std::size_t j = 0; j < nb; ++j) out[k0 + j] = {acc_re[j], acc_im[j]};
    }
}

const KernelTable kScalar{SimdLevel::Scalar, "scalar", &complex_dot_scalar,
                          &nonuniform_dft_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace fvv::kernels
