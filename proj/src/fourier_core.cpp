#include "fvv/fourier_core.hpp"

#include "fvv/kernels/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <string>

namespace fvv {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// The FFT shortcut is exact only when t_i = 2*pi*i/n to rounding.
bool on_full_regular_grid(const PriceSeries& s) {
    const auto& t = s.times();
    const double n = static_cast<double>(s.n_increments());
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * kTwoPi;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (std::abs(t[i] - kTwoPi * (static_cast<double>(i) / n)) > tol) return false;
    return true;
}

CoeffArray coeffs_dp_fft(const PriceSeries& series, int k_max) {
    const std::size_t n = series.n_increments();
    const std::size_t n_out = n / 2 + 1;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n_out);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    const auto& p = series.log_prices();
    for (std::size_t i = 0; i < n; ++i) in[i] = p[i + 1] - p[i];
    fftw_execute(plan);

    CoeffArray c(k_max);
    const double scale = 1.0 / kTwoPi;
    for (int k = 0; k <= k_max; ++k) {
        const std::size_t r = static_cast<std::size_t>(k) % n;
        std::complex<double> v;
        if (r < n_out)
            v = {out[r][0], out[r][1]};
        else
            v = {out[n - r][0], -out[n - r][1]};
        c[k] = v * scale;
        c[-k] = std::conj(c[k]);
    }
    c[0] = {c[0].real(), 0.0};
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return c;
}

void check_k_max(int k_max) {
    if (k_max < 0) throw InputError("k_max must be non-negative, got " + std::to_string(k_max));
}

}  // namespace

CoeffArray coeffs_dp_direct(const PriceSeries& series, int k_max) {
    check_k_max(k_max);
    const std::size_t n = series.n_increments();
    const std::vector<double> dp = series.increments();
    std::vector<std::complex<double>> pos(static_cast<std::size_t>(k_max) + 1);
    kernels::active().nonuniform_dft(series.times().data(), dp.data(), n, 0, pos.size(),
                                     pos.data());
    CoeffArray c(k_max);
    for (int k = 0; k <= k_max; ++k) {
        c[k] = pos[static_cast<std::size_t>(k)] / kTwoPi;
        c[-k] = std::conj(c[k]);
    }
    c[0] = {c[0].real(), 0.0};
    return c;
}

CoeffArray coeffs_dp(const PriceSeries& series, int k_max) {
    check_k_max(k_max);
    if (on_full_regular_grid(series)) return coeffs_dp_fft(series, k_max);
    return coeffs_dp_direct(series, k_max);
}

CoeffArray coeffs_v(const CoeffArray& dp, int N, int k_range) {
    if (N < 1) throw InputError("N must be at least 1");
    if (k_range < 0) throw InputError("k_range must be non-negative");
    if (dp.k_max() < N + k_range)
        throw InputError("insufficient dp coefficients: need k_max >= N + k_range = " +
                         std::to_string(N + k_range) + ", have " + std::to_string(dp.k_max()));

    const int K = dp.k_max();
    const auto a = dp.data();
    // Reversed copy turns the convolution into a contiguous dot product:
    // c_{k-s} = rev[K - k + s].
    std::vector<std::complex<double>> rev(a.rbegin(), a.rend());
    const auto& kt = kernels::active();
    const double scale = kTwoPi / static_cast<double>(2 * N + 1);
    const std::size_t len = static_cast<std::size_t>(2 * N + 1);
    const bool hermitian = dp.is_hermitian();

    CoeffArray v(k_range);
    for (int k = hermitian ? 0 : -k_range; k <= k_range; ++k) {
        const auto* x = a.data() + (K - N);
        const auto* y = rev.data() + (K - k - N);
        v[k] = kt.complex_dot(x, y, len) * scale;
        if (hermitian && k > 0) v[-k] = std::conj(v[k]);
    }
    if (hermitian) v[0] = {v[0].real(), 0.0};
    return v;
}

double dirichlet(int N, double x) {
    if (N < 0) throw InputError("Dirichlet order must be non-negative");
    const double s = std::sin(0.5 * x);
    if (std::abs(s) < kKernelSingularity) return 1.0;
    const double m = static_cast<double>(2 * N + 1);
    return std::sin(0.5 * m * x) / (m * s);
}

double fejer(int M, double x, int order) {
    if (M < 0) throw InputError("Fejer order must be non-negative");
    if (order < 0 || order > 2) throw InputError("Fejer derivative order must be 0, 1 or 2");
    const double m1 = static_cast<double>(M + 1);
    if (order == 0) {
        const double s = std::sin(0.5 * x);
        if (std::abs(s) < kKernelSingularity) return m1;
        const double q = std::sin(0.5 * m1 * x) / s;
        return q * q / m1;
    }
    // Derivatives of 1 + 2 sum_k w_k cos(kx).
    double acc = 0.0;
    for (int k = 1; k <= M; ++k) {
        const double w = 1.0 - static_cast<double>(k) / m1;
        const double kk = static_cast<double>(k);
        acc += order == 1 ? -w * kk * std::sin(kk * x) : -w * kk * kk * std::cos(kk * x);
    }
    return 2.0 * acc;
}

}  // namespace fvv
