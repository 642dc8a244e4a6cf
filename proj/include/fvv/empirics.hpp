#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace fvv {

/// One value per trading day, dates strictly increasing.
struct DailySeries {
    std::vector<std::chrono::year_month_day> dates;
    std::vector<double> values;
    std::string label;

    void validate() const;
};

struct SampleStats {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;   // n - 1 denominator
    double skewness = 0.0;  // m3 / m2^{3/2}
    double kurtosis = 0.0;  // m4 / m2^2, not excess
    double min = 0.0;
    double max = 0.0;
    bool shape_defined = true;  // false for a constant series: skewness and kurtosis are NaN
};

SampleStats sample_stats(const std::vector<double>& x);

struct AcfRow {
    int lag = 0;
    double value = 0.0;
    double band = 0.0;  // 1.96 / sqrt(n), white-noise 95% half-width
};

/// Sample autocorrelations for lags 0..max_lag. Requires max_lag < n / 4.
std::vector<AcfRow> acf(const std::vector<double>& x, int max_lag);

/// Pearson correlation. NaN when either input is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct YearCorrelation {
    int year = 0;
    std::size_t n_common = 0;
    double volvol_vol = 0.0;
    double vol_ret = 0.0;
    double volvol_ret = 0.0;
    bool flagged = false;  // too few common days, left out of the averages
};

struct CorrelationTable {
    std::vector<YearCorrelation> years;
    double avg_volvol_vol = 0.0;  // means over unflagged years
    double avg_vol_ret = 0.0;
    double avg_volvol_ret = 0.0;
};

/// Pearson correlations per calendar year on the dates common to all three series.
CorrelationTable yearly_correlations(const DailySeries& volvol, const DailySeries& vol,
                                     const DailySeries& returns, std::size_t min_days = 30);

struct LognormalityRow {
    int year = 0;
    std::size_t n = 0;
    double jb_stat = 0.0;
    double jb_p = 0.0;
    double ad_stat = 0.0;  // small-sample adjusted A*^2
    double ad_p = 0.0;
    bool reject_jb = false;
    bool reject_ad = false;
    bool degenerate = false;  // constant year: both tests reject
    bool undersized = false;  // fewer than min_obs values: no test run
};

/// Normality tests of log values per calendar year at significance `alpha`.
std::vector<LognormalityRow> lognormality_tests(const DailySeries& s, double alpha = 0.05,
                                                std::size_t min_obs = 30);

/// Jarque-Bera statistic and chi-square(2) p-value.
std::pair<double, double> jarque_bera(const std::vector<double>& x);

/// Anderson-Darling normality test with estimated mean and variance:
/// adjusted statistic and p-value.
std::pair<double, double> anderson_darling(const std::vector<double>& x);

/// Asymptotic Kolmogorov-Smirnov test of x against N(0, 1): (D, p-value).
std::pair<double, double> ks_test_normal(const std::vector<double>& x);

std::chrono::year_month_day parse_date(const std::string& s);
std::string format_date(std::chrono::year_month_day d);

}  // namespace fvv
