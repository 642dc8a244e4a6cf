#pragma once

#include "fvv/types.hpp"

namespace fvv {

/// Tuning of one estimation run.
///
/// `c_N` and `c_M` are the clock-scale constants, c_N = N * rho and
/// c_M = M * sqrt(rho), with rho the (average) clock mesh.
struct EstimatorConfig {
    int N = 0;
    int M = 0;
    int L = 0;
    double c_N = 0.0;
    double c_M = 0.0;
    double rho = 0.0;
    double iota = 0.3;

    void validate() const;

    /// Config for `series` with cutting frequency M. N is the Nyquist
    /// frequency and L defaults to min(ceil(n^{1/4}), M - 1).
    static EstimatorConfig for_series(const PriceSeries& series, int M, int L = -1);
};

/// Point estimate with optional inference.
///
/// `averaged_volvol` estimates (1/2pi) int_0^{2pi} gamma^2 dt on the clock,
/// `integrated_volvol` is 2*pi times that. The standard error lives on the
/// averaged scale; the interval bounds on the integrated scale.
struct VolvolEstimate {
    double averaged_volvol = 0.0;
    double integrated_volvol = 0.0;
    bool debias_applied = false;
    bool negative = false;
    double asymptotic_variance = 0.0;
    bool variance_available = false;  // false when the feasible variance came out negative
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double level = 0.0;
};

/// r(1-r) / (2 a^2) with r the fractional part of a.
double eta(double a);

/// K = (1/3) (c_M^2 / 2pi) (1 + 2 eta(c_N / pi)).
double bias_constant_K(double c_M, double c_N);

/// 2pi sum_{|k|<=M} c_k(v) c_{-k}(v).
double quarticity(const CoeffArray& vc, int M);

/// Fejer-weighted raw estimator, clock scale.
double volvol_raw(const CoeffArray& vc, int M);

/// Raw estimator minus K times the quarticity estimate.
VolvolEstimate volvol_debiased(const CoeffArray& vc, const EstimatorConfig& cfg);

/// Raw estimator wrapped in the result type.
VolvolEstimate volvol_biased(const CoeffArray& vc, const EstimatorConfig& cfg);

/// sum_{|h|<=M} c_h(v) c_{k-h}(v).
std::complex<double> coeff_sigma4(const CoeffArray& vc, int M, int k);

/// Fourier coefficient k of the vol-of-vol process, optionally debiased with K.
std::complex<double> coeff_volvol(const CoeffArray& vc, int M, int k, bool debias, double K);

/// Feasible variance of the debiased estimator.
double feasible_variance_lambda(const CoeffArray& vc, const EstimatorConfig& cfg);

/// Feasible variance of the raw estimator; c_M here is M * rho^iota.
double feasible_variance_gamma(const CoeffArray& vc, const EstimatorConfig& cfg);

/// Attaches the feasible variance (Lambda when debiased, Gamma otherwise).
/// A negative value is kept and flagged through `variance_available`.
VolvolEstimate with_feasible_variance(const VolvolEstimate& est, const CoeffArray& vc,
                                      const EstimatorConfig& cfg);

/// Standard error and `level` interval from `est.asymptotic_variance`.
/// Debiased: SE = rho^{1/4} sqrt(Lambda). Raw: SE = rho^{iota/2} sqrt(Gamma).
/// Throws on a negative variance.
VolvolEstimate confidence_interval(const VolvolEstimate& est, const EstimatorConfig& cfg,
                                   double level = 0.95);

/// Point estimate, feasible variance and interval in one call. The interval
/// fields are NaN when the variance is unavailable.
VolvolEstimate estimate_with_ci(const CoeffArray& vc, const EstimatorConfig& cfg, bool debias,
                                double level = 0.95);

/// Highest |k| of c(v) the variance formulas touch: M + L.
inline int required_v_range(const EstimatorConfig& cfg) { return cfg.M + cfg.L; }


/// Scale factor from the [0, 2*pi] clock to calendar units for vol-of-vol.
inline double volvol_unit_factor(double horizon) {
    const double f = kTwoPi / horizon;
    return f * f;
}

/// Integrated clock-scale vol-of-vol to calendar units.
inline double to_calendar_volvol(double integrated_clock_value, double horizon) {
    return integrated_clock_value * volvol_unit_factor(horizon);
}

/// Scale factor from the clock to calendar units for integrated quarticity.
/// Integrated variance needs none: quadratic variation is clock-invariant.
inline double quarticity_unit_factor(double horizon) { return kTwoPi / horizon; }

/// Residual-imaginary check: throws if |imag| > 1e-10 * magnitude.
double checked_real(std::complex<double> z, double magnitude, const char* what);

}  // namespace fvv
