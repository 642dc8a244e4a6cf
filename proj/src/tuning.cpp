#include "fvv/tuning.hpp"

#include "fvv/fourier_core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fvv {

int nyquist_N(std::size_t n) {
    if (n < 1) throw InputError("need at least one increment");
    return static_cast<int>(n / 2);
}

namespace {

int select_M_mesh(std::size_t n, double rho, double c_M) {
    if (!(c_M > 0.0)) throw InputError("c_M must be positive");
    const int N = nyquist_N(n);
    if (N < 3) throw InputError("series too short: Nyquist frequency below 3");
    const int M = static_cast<int>(std::floor(c_M / std::sqrt(rho)));
    return std::clamp(M, 2, N - 1);
}

}  // namespace

int select_M(std::size_t n, double c_M) {
    return select_M_mesh(n, kTwoPi / static_cast<double>(n), c_M);
}

int select_M(const PriceSeries& series, double c_M) {
    return select_M_mesh(series.n_increments(), series.mean_mesh(), c_M);
}

void AdaptiveConfig::validate() const {
    if (!(c0 > 0.0)) throw InputError("initial c_M must be positive");
    if (!(step > 0.0)) throw InputError("step must be positive");
    if (!(threshold > 0.0)) throw InputError("threshold must be positive");
    if (max_iters < 1) throw InputError("max_iters must be at least 1");
}

AdaptiveResult adaptive_search(const std::function<double(double)>& se_of_cM,
                               const AdaptiveConfig& cfg) {
    cfg.validate();
    AdaptiveResult res;
    const double se0 = se_of_cM(cfg.c0);
    if (!(se0 > 0.0) || !std::isfinite(se0))
        throw InputError("standard error at the initial c_M is zero or unavailable");
    res.cM_trace.push_back(cfg.c0);
    res.se_trace.push_back(se0);
    res.c_M = cfg.c0;
    for (int j = 1; j <= cfg.max_iters; ++j) {
        const double c = cfg.c0 + j * cfg.step;
        const double se = se_of_cM(c);
        const double prev = res.se_trace.back();
        res.cM_trace.push_back(c);
        res.se_trace.push_back(se);
        res.c_M = c;
        const double scale = cfg.rule == StopRule::RelativeToInitial ? se0 : prev;
        // NaN on either side compares false and the walk continues.
        if (std::abs(se - prev) / scale < cfg.threshold) {
            res.converged = true;
            break;
        }
    }
    return res;
}

double debiased_std_error(const PriceSeries& series, const CoeffArray& dp, double c_M) {
    const int M = select_M(series, c_M);
    const EstimatorConfig cfg = EstimatorConfig::for_series(series, M);
    const CoeffArray vc = coeffs_v(dp, cfg.N, required_v_range(cfg));
    const VolvolEstimate est = estimate_with_ci(vc, cfg, true);
    return est.variance_available ? est.std_error : std::numeric_limits<double>::quiet_NaN();
}

AdaptiveResult adaptive_cM(const PriceSeries& series, const AdaptiveConfig& cfg) {
    cfg.validate();
    const int N = nyquist_N(series.n_increments());
    // One coefficient pass covers every M the walk can reach.
    const int M_cap = select_M(series, cfg.c0 + cfg.max_iters * cfg.step);
    const int L_cap = static_cast<int>(
        std::ceil(std::pow(static_cast<double>(series.n_increments()), 0.25)));
    const CoeffArray dp = coeffs_dp(series, N + M_cap + L_cap);
    AdaptiveResult res = adaptive_search(
        [&](double c) { return debiased_std_error(series, dp, c); }, cfg);
    res.M = select_M(series, res.c_M);
    return res;
}

}  // namespace fvv
