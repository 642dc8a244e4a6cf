#pragma once

#include "fvv/types.hpp"
#include "fvv/volvol.hpp"

#include <functional>
#include <vector>

namespace fvv {

/// floor(n / 2).
int nyquist_N(std::size_t n);

/// M = floor(c_M * rho^{-1/2}) with rho the mean mesh on the [0, 2pi] clock,
/// at least 2 and below the Nyquist frequency. c_M is therefore the same
/// constant EstimatorConfig carries, up to the floor.
int select_M(const PriceSeries& series, double c_M);
/// Regular grid of n increments: rho = 2pi / n.
int select_M(std::size_t n, double c_M);

enum class StopRule {
    RelativeToInitial,   // |SE_j - SE_{j-1}| / SE_0 < threshold
    RelativeToPrevious,  // |SE_j - SE_{j-1}| / SE_{j-1} < threshold
};

struct AdaptiveConfig {
    double c0 = 0.03;
    double step = 0.01;
    double threshold = 0.25;
    int max_iters = 50;
    StopRule rule = StopRule::RelativeToInitial;

    void validate() const;
};

struct AdaptiveResult {
    double c_M = 0.0;
    int M = 0;
    bool converged = false;
    std::vector<double> cM_trace;
    std::vector<double> se_trace;
};

/// Walks c_M upward on a fixed grid until the standard error stops moving.
/// `se_of_cM` returns NaN when the standard error is unavailable.
AdaptiveResult adaptive_search(const std::function<double(double)>& se_of_cM,
                               const AdaptiveConfig& cfg);

/// Standard error of the debiased estimator for `series` at user-scale c_M.
double debiased_std_error(const PriceSeries& series, const CoeffArray& dp, double c_M);

/// Adaptive choice of c_M for one series.
AdaptiveResult adaptive_cM(const PriceSeries& series, const AdaptiveConfig& cfg = {});

}  // namespace fvv
