#pragma once

#include "fvv/types.hpp"

namespace fvv {

/// c_k(dp) = (1/2pi) sum_i exp(-i k t_i) (p_{i+1} - p_i) for |k| <= k_max.
///
/// A full regular grid (gap 2*pi/n) goes through a real FFT; any other
/// grid uses the direct nonuniform sum.
CoeffArray coeffs_dp(const PriceSeries& series, int k_max);

/// Same quantity, always through the direct sum.
CoeffArray coeffs_dp_direct(const PriceSeries& series, int k_max);

/// Variance coefficients by Bohr convolution:
/// c_k(v) = (2pi / (2N+1)) sum_{|s|<=N} c_s(dp) c_{k-s}(dp), |k| <= k_range.
/// Needs dp.k_max() >= N + k_range.
CoeffArray coeffs_v(const CoeffArray& dp, int N, int k_range);

/// Normalized Dirichlet kernel sin((2N+1)x/2) / ((2N+1) sin(x/2)), equal to 1 at x = 0.
double dirichlet(int N, double x);

/// Fejer kernel sum_{|k|<=M} (1 - |k|/(M+1)) e^{ikx} and its first two derivatives.
double fejer(int M, double x, int order = 0);

/// |sin(x/2)| below this switches the closed forms to their limits.
inline constexpr double kKernelSingularity = 1e-9;

}  // namespace fvv
