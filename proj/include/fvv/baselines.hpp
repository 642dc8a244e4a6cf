#pragma once

#include "fvv/types.hpp"

#include <vector>

namespace fvv {

/// Rolling-window spot estimates on a regular grid, calendar units.
/// Entry a covers increments a, ..., a + kappa - 1.
struct SpotGridEstimates {
    int kappa = 0;
    double rho = 0.0;                // calendar mesh, horizon / n
    std::vector<double> spot_var;    // sum r^2 / (kappa rho)
    std::vector<double> spot_quart;  // sum r^4 / (3 kappa rho^2)
};

SpotGridEstimates spot_variance(const PriceSeries& series, int kappa);

/// Window length max(2, floor(beta * rho^{-1/2})), rho = horizon / n.
int window_length(const PriceSeries& series, double beta);

/// Realized vol-of-vol with squared-spot bias correction, calendar units.
double asj_estimator(const PriceSeries& series, double beta);

/// Same with the spot-quarticity bias correction.
double vetter_estimator(const PriceSeries& series, double beta);

/// Both estimators for an explicit window length.
double asj_estimator_kappa(const PriceSeries& series, int kappa);
double vetter_estimator_kappa(const PriceSeries& series, int kappa);

}  // namespace fvv
