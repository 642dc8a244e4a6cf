#include "fvv/volvol.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace fvv {
namespace {

void require_range(const CoeffArray& vc, int needed, const char* what) {
    if (vc.k_max() < needed)
        throw InputError(std::string(what) + ": need variance coefficients up to |k| = " +
                         std::to_string(needed) + ", have " + std::to_string(vc.k_max()));
}

double fejer_weight(int k, int M) {
    return 1.0 - static_cast<double>(std::abs(k)) / static_cast<double>(M + 1);
}

}  // namespace

double checked_real(std::complex<double> z, double magnitude, const char* what) {
    if (std::abs(z.imag()) > 1e-10 * magnitude)
        throw NumericalError(std::string(what) + ": imaginary residue " +
                             std::to_string(z.imag()) + " against magnitude " +
                             std::to_string(magnitude));
    return z.real();
}

void EstimatorConfig::validate() const {
    if (N < 1) throw InputError("N must be at least 1");
    if (M < 1) throw InputError("M must be at least 1");
    if (M >= N)
        throw InputError("M must be below N (M = " + std::to_string(M) +
                         ", N = " + std::to_string(N) + ")");
    if (L < 0 || L >= M)
        throw InputError("L must lie in [0, M) (L = " + std::to_string(L) + ")");
    if (!(c_N > 0.0) || !(c_M > 0.0)) throw InputError("c_N and c_M must be positive");
    if (!(rho > 0.0)) throw InputError("mesh rho must be positive");
    if (!(iota > 0.0 && iota < 0.4)) throw InputError("iota must lie in (0, 0.4)");
}

EstimatorConfig EstimatorConfig::for_series(const PriceSeries& series, int M, int L) {
    const std::size_t n = series.n_increments();
    EstimatorConfig cfg;
    cfg.N = static_cast<int>(n / 2);
    cfg.M = M;
    cfg.rho = series.mean_mesh();
    cfg.c_N = cfg.N * cfg.rho;
    cfg.c_M = M * std::sqrt(cfg.rho);
    if (L < 0) {
        const int quarter = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.25)));
        L = std::min(quarter, M - 1);
    }
    cfg.L = L;
    cfg.validate();
    return cfg;
}

double eta(double a) {
    if (!(a > 0.0)) throw InputError("eta needs a positive argument");
    const double r = a - std::floor(a);
    return r * (1.0 - r) / (2.0 * a * a);
}

double bias_constant_K(double c_M, double c_N) {
    if (c_M < 0.0) throw InputError("c_M must be non-negative");
    return (c_M * c_M / (3.0 * kTwoPi)) * (1.0 + 2.0 * eta(c_N / kPi));
}

double quarticity(const CoeffArray& vc, int M) {
    if (M < 0) throw InputError("M must be non-negative");
    require_range(vc, M, "quarticity");
    std::complex<double> s = 0.0;
    double mag = 0.0;
    for (int k = -M; k <= M; ++k) {
        s += vc[k] * vc[-k];
        mag += std::abs(vc[k]) * std::abs(vc[-k]);
    }
    return kTwoPi * checked_real(s, mag, "quarticity");
}

double volvol_raw(const CoeffArray& vc, int M) {
    if (M < 1) throw InputError("M must be at least 1");
    require_range(vc, M, "volvol_raw");
    std::complex<double> s = 0.0;
    double mag = 0.0;
    for (int k = -M; k <= M; ++k) {
        const double w = fejer_weight(k, M) * static_cast<double>(k) * static_cast<double>(k);
        s += w * (vc[k] * vc[-k]);
        mag += w * std::abs(vc[k]) * std::abs(vc[-k]);
    }
    return (kTwoPi / static_cast<double>(M + 1)) * checked_real(s, mag, "volvol_raw");
}

VolvolEstimate volvol_biased(const CoeffArray& vc, const EstimatorConfig& cfg) {
    cfg.validate();
    VolvolEstimate e;
    e.averaged_volvol = volvol_raw(vc, cfg.M);
    e.integrated_volvol = kTwoPi * e.averaged_volvol;
    return e;
}

VolvolEstimate volvol_debiased(const CoeffArray& vc, const EstimatorConfig& cfg) {
    cfg.validate();
    VolvolEstimate e;
    e.averaged_volvol =
        volvol_raw(vc, cfg.M) - bias_constant_K(cfg.c_M, cfg.c_N) * quarticity(vc, cfg.M);
    e.integrated_volvol = kTwoPi * e.averaged_volvol;
    e.debias_applied = true;
    e.negative = e.averaged_volvol < 0.0;
    return e;
}

std::complex<double> coeff_sigma4(const CoeffArray& vc, int M, int k) {
    if (std::abs(k) > 2 * M)
        throw InputError("coefficient index " + std::to_string(k) + " exceeds 2M");
    require_range(vc, M + std::abs(k), "coeff_sigma4");
    std::complex<double> s = 0.0;
    for (int h = -M; h <= M; ++h) s += vc[h] * vc[k - h];
    return s;
}

std::complex<double> coeff_volvol(const CoeffArray& vc, int M, int k, bool debias, double K) {
    if (std::abs(k) > 2 * M)
        throw InputError("coefficient index " + std::to_string(k) + " exceeds 2M");
    require_range(vc, M + std::abs(k), "coeff_volvol");
    std::complex<double> s = 0.0;
    for (int h = -M; h <= M; ++h) {
        const double w = fejer_weight(h, M) * static_cast<double>(h) * static_cast<double>(h - k);
        s += w * (vc[h] * vc[k - h]);
    }
    s *= kTwoPi / static_cast<double>(M + 1);
    if (debias) s -= K * kTwoPi * coeff_sigma4(vc, M, k);
    return s;
}

double feasible_variance_lambda(const CoeffArray& vc, const EstimatorConfig& cfg) {
    cfg.validate();
    require_range(vc, required_v_range(cfg), "feasible_variance_lambda");
    const double K = bias_constant_K(cfg.c_M, cfg.c_N);
    const double g = 1.0 + 2.0 * eta(cfg.c_N / kPi);
    const int L = cfg.L;

    std::vector<std::complex<double>> vol(2 * L + 1), s4(2 * L + 1);
    for (int k = -L; k <= L; ++k) {
        vol[k + L] = coeff_volvol(vc, cfg.M, k, true, K);
        s4[k + L] = coeff_sigma4(vc, cfg.M, k);
    }
    std::complex<double> v1 = 0.0, v2 = 0.0, v3 = 0.0;
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (int k = -L; k <= L; ++k) {
        v1 += vol[k + L] * vol[L - k];
        v2 += vol[k + L] * s4[L - k];
        v3 += s4[k + L] * s4[L - k];
        m1 += std::abs(vol[k + L]) * std::abs(vol[L - k]);
        m2 += std::abs(vol[k + L]) * std::abs(s4[L - k]);
        m3 += std::abs(s4[k + L]) * std::abs(s4[L - k]);
    }
    const double c = cfg.c_M;
    return (4.0 / (3.0 * c)) * checked_real(v1, m1, "V1") +
           (16.0 / 15.0) * c * g * checked_real(v2, m2, "V2") +
           (16.0 / 105.0) * c * c * c * g * g * checked_real(v3, m3, "V3");
}

double feasible_variance_gamma(const CoeffArray& vc, const EstimatorConfig& cfg) {
    cfg.validate();
    require_range(vc, required_v_range(cfg), "feasible_variance_gamma");
    const double c = cfg.M * std::pow(cfg.rho, cfg.iota);
    std::complex<double> s = 0.0;
    double mag = 0.0;
    for (int k = 0; k <= cfg.L; ++k) {
        const auto a = coeff_volvol(vc, cfg.M, k, false, 0.0);
        const auto b = k == 0 ? a : coeff_volvol(vc, cfg.M, -k, false, 0.0);
        const double mult = k == 0 ? 1.0 : 2.0;
        s += mult * a * b;
        mag += mult * std::abs(a) * std::abs(b);
    }
    return (4.0 / (3.0 * c)) * checked_real(s, mag, "Gamma");
}

VolvolEstimate with_feasible_variance(const VolvolEstimate& est, const CoeffArray& vc,
                                      const EstimatorConfig& cfg) {
    VolvolEstimate out = est;
    out.asymptotic_variance = est.debias_applied ? feasible_variance_lambda(vc, cfg)
                                                 : feasible_variance_gamma(vc, cfg);
    out.variance_available = out.asymptotic_variance >= 0.0;
    return out;
}

VolvolEstimate confidence_interval(const VolvolEstimate& est, const EstimatorConfig& cfg,
                                   double level) {
    if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
    if (!(est.asymptotic_variance >= 0.0))
        throw InputError("negative asymptotic variance, no interval available");
    if (!(cfg.rho > 0.0)) throw InputError("mesh rho must be positive");
    VolvolEstimate out = est;
    out.level = level;
    out.variance_available = true;
    const double rate = est.debias_applied ? std::pow(cfg.rho, 0.25)
                                           : std::pow(cfg.rho, 0.5 * cfg.iota);
    out.std_error = rate * std::sqrt(est.asymptotic_variance);
    const boost::math::normal_distribution<double> z01;
    const double half = boost::math::quantile(z01, 0.5 + 0.5 * level) * out.std_error;
    out.ci_low = kTwoPi * (est.averaged_volvol - half);
    out.ci_high = kTwoPi * (est.averaged_volvol + half);
    return out;
}

VolvolEstimate estimate_with_ci(const CoeffArray& vc, const EstimatorConfig& cfg, bool debias,
                                double level) {
    VolvolEstimate e = with_feasible_variance(
        debias ? volvol_debiased(vc, cfg) : volvol_biased(vc, cfg), vc, cfg);
    if (e.variance_available) return confidence_interval(e, cfg, level);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    e.level = level;
    e.std_error = e.ci_low = e.ci_high = nan;
    return e;
}


}  // namespace fvv
