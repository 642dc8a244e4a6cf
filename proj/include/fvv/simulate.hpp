#pragma once

#include "fvv/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fvv {

struct HestonParams {
    double mu = 0.1;
    double theta = 5.0;
    double alpha = 0.2;
    double gamma = 0.5;
    double rho = -0.8;
    double p0 = 1.0;
    double v0 = 0.2;

    void validate() const;
};

/// Stochastic vol-of-vol: v has diffusion gamma(t), gamma^2 is square-root
/// mean reverting and driven by a Brownian motion independent of W and Z.
struct SvvParams {
    double mu = 0.1;
    double theta = 5.0;
    double alpha = 0.2;
    double chi = 7.0;
    double eta_bar = 0.1;
    double xi = 0.8;
    double rho = -0.8;
    double p0 = 1.0;
    double v0 = 0.2;
    double g0 = 0.1;

    void validate() const;
};

/// Simulated path on a uniform grid of n steps over `horizon` years.
/// v and g2 hold the truncated (non-negative) values fed to the dynamics.
struct SimPath {
    double horizon = kTradingDay;
    std::vector<double> log_price;
    std::vector<double> v;
    std::vector<double> g2;
    double true_integrated_volvol = 0.0;  // calendar units, trapezoid rule
    std::uint64_t seed = 0;

    std::size_t n_steps() const { return log_price.empty() ? 0 : log_price.size() - 1; }
    double time(std::size_t i) const {
        return horizon * static_cast<double>(i) / static_cast<double>(n_steps());
    }
};

/// Euler-Maruyama with full truncation.
SimPath simulate_heston(const HestonParams& params, std::size_t n_steps, double horizon,
                        std::uint64_t seed);
SimPath simulate_svv(const SvvParams& params, std::size_t n_steps, double horizon,
                     std::uint64_t seed);

/// Every `stride`-th point of the path as a series on [0, 2*pi].
PriceSeries sample_regular(const SimPath& path, std::size_t stride = 1);

/// Observation times with exponential durations of mean `mean_duration`
/// (same unit as `seconds_per_horizon`), each snapped to the previous
/// simulation point. Points hit twice are kept once.
PriceSeries poisson_resample(const SimPath& path, double mean_duration, std::uint64_t seed,
                             double seconds_per_horizon = 23400.0);

/// Independent stream seed for path `index` of a run with `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Time, log-price, v and g2 columns.
void write_path_csv(const SimPath& path, const std::string& file, double seconds_per_horizon);

}  // namespace fvv
