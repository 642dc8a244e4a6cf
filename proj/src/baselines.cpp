#include "fvv/baselines.hpp"

#include <cmath>
#include <string>

namespace fvv {
namespace {

void require_regular(const PriceSeries& s) {
    if (!s.is_regular()) throw InputError("spot estimators need a regular grid");
}

enum class Correction { SquaredSpot, Quarticity };

double realized_volvol(const PriceSeries& series, int kappa, Correction corr) {
    const SpotGridEstimates sp = spot_variance(series, kappa);
    const std::size_t n = series.n_increments();
    if (2 * static_cast<std::size_t>(kappa) > n)
        throw InputError("series too short for window " + std::to_string(kappa));
    const double k = static_cast<double>(kappa);
    double sum = 0.0;
    for (std::size_t a = 0; a + 2 * kappa <= n; ++a) {
        const double d = sp.spot_var[a + kappa] - sp.spot_var[a];
        const double bias = corr == Correction::SquaredSpot ? sp.spot_var[a] * sp.spot_var[a]
                                                            : sp.spot_quart[a];
        sum += d * d - (4.0 / k) * bias;
    }
    return 1.5 / k * sum;
}

}  // namespace

SpotGridEstimates spot_variance(const PriceSeries& series, int kappa) {
    require_regular(series);
    const std::size_t n = series.n_increments();
    if (kappa < 1 || static_cast<std::size_t>(kappa) * 4 > n)
        throw InputError("window length must lie in [1, n/4], got " + std::to_string(kappa));

    SpotGridEstimates out;
    out.kappa = kappa;
    out.rho = series.horizon() / static_cast<double>(n);
    const std::vector<double> r = series.increments();
    const std::size_t m = n - static_cast<std::size_t>(kappa) + 1;
    out.spot_var.resize(m);
    out.spot_quart.resize(m);
    const double kr = static_cast<double>(kappa) * out.rho;
    // Window sums recomputed per anchor; kappa is small and this keeps
    // results free of running-sum drift.
    for (std::size_t a = 0; a < m; ++a) {
        double s2 = 0.0, s4 = 0.0;
        for (std::size_t j = a; j < a + static_cast<std::size_t>(kappa); ++j) {
            const double q = r[j] * r[j];
            s2 += q;
            s4 += q * q;
        }
        out.spot_var[a] = s2 / kr;
        out.spot_quart[a] = s4 / (3.0 * kr * out.rho);
    }
    return out;
}

int window_length(const PriceSeries& series, double beta) {
    if (!(beta > 0.0)) throw InputError("beta must be positive");
    const double rho = series.horizon() / static_cast<double>(series.n_increments());
    const double k = std::floor(beta / std::sqrt(rho));
    return std::max(2, static_cast<int>(k));
}

double asj_estimator_kappa(const PriceSeries& series, int kappa) {
    return realized_volvol(series, kappa, Correction::SquaredSpot);
}

double vetter_estimator_kappa(const PriceSeries& series, int kappa) {
    return realized_volvol(series, kappa, Correction::Quarticity);
}

double asj_estimator(const PriceSeries& series, double beta) {
    return asj_estimator_kappa(series, window_length(series, beta));
}

double vetter_estimator(const PriceSeries& series, double beta) {
    return vetter_estimator_kappa(series, window_length(series, beta));
}

}  // namespace fvv
