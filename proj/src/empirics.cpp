#include "fvv/empirics.hpp"

#include "fvv/types.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace fvv {
namespace {

struct Moments {
    double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

Moments central_moments(const std::vector<double>& x) {
    Moments m;
    const double n = static_cast<double>(x.size());
    for (double v : x) m.mean += v;
    m.mean /= n;
    for (double v : x) {
        const double d = v - m.mean, d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
    }
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    return m;
}

bool is_constant(const std::vector<double>& x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

int year_of(std::chrono::year_month_day d) { return static_cast<int>(d.year()); }

}  // namespace

void DailySeries::validate() const {
    if (dates.size() != values.size()) throw InputError("dates and values differ in length");
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (!(dates[i] > dates[i - 1]))
            throw InputError("dates not strictly increasing at " + format_date(dates[i]));
}

SampleStats sample_stats(const std::vector<double>& x) {
    if (x.size() < 2) throw InputError("sample statistics need at least 2 values");
    SampleStats s;
    s.n = x.size();
    const Moments m = central_moments(x);
    s.mean = m.mean;
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    s.median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
    const double n = static_cast<double>(x.size());
    s.std_dev = std::sqrt(m.m2 * n / (n - 1.0));
    if (m.m2 > 0.0) {
        s.skewness = m.m3 / std::pow(m.m2, 1.5);
        s.kurtosis = m.m4 / (m.m2 * m.m2);
    } else {
        s.skewness = s.kurtosis = std::numeric_limits<double>::quiet_NaN();
        s.shape_defined = false;
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

std::vector<AcfRow> acf(const std::vector<double>& x, int max_lag) {
    if (max_lag < 0) throw InputError("max_lag must be non-negative");
    if (4 * static_cast<std::size_t>(max_lag) >= x.size())
        throw InputError("max_lag must be below a quarter of the series length (" +
                         std::to_string(x.size()) + ")");
    if (is_constant(x)) throw InputError("autocorrelation of a constant series is undefined");
    const Moments m = central_moments(x);
    const double n = static_cast<double>(x.size());
    const double denom = m.m2 * n;
    std::vector<AcfRow> r(static_cast<std::size_t>(max_lag) + 1);
    for (int k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(k) < x.size(); ++t)
            s += (x[t] - m.mean) * (x[t + static_cast<std::size_t>(k)] - m.mean);
        auto& row = r[static_cast<std::size_t>(k)];
        row.lag = k;
        row.value = k == 0 ? 1.0 : s / denom;
        row.band = 1.96 / std::sqrt(n);
    }
    return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("pearson needs two equal samples");
    const Moments mx = central_moments(x), my = central_moments(y);
    if (!(mx.m2 > 0.0 && my.m2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    double c = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) c += (x[k] - mx.mean) * (y[k] - my.mean);
    c /= static_cast<double>(x.size());
    return std::clamp(c / std::sqrt(mx.m2 * my.m2), -1.0, 1.0);
}

CorrelationTable yearly_correlations(const DailySeries& volvol, const DailySeries& vol,
                                     const DailySeries& returns, std::size_t min_days) {
    volvol.validate();
    vol.validate();
    returns.validate();
    struct Triple {
        std::vector<double> a, b, c;
    };
    std::map<int, Triple> by_year;
    std::size_t i = 0, j = 0, k = 0;
    while (i < volvol.dates.size() && j < vol.dates.size() && k < returns.dates.size()) {
        const auto d = std::max({volvol.dates[i], vol.dates[j], returns.dates[k]});
        if (volvol.dates[i] < d) { ++i; continue; }
        if (vol.dates[j] < d) { ++j; continue; }
        if (returns.dates[k] < d) { ++k; continue; }
        auto& t = by_year[year_of(d)];
        t.a.push_back(volvol.values[i++]);
        t.b.push_back(vol.values[j++]);
        t.c.push_back(returns.values[k++]);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CorrelationTable t;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t used = 0;
    for (const auto& [year, tr] : by_year) {
        YearCorrelation yc;
        yc.year = year;
        yc.n_common = tr.a.size();
        if (yc.n_common < min_days) {
            yc.flagged = true;
            yc.volvol_vol = yc.vol_ret = yc.volvol_ret = nan;
        } else {
            yc.volvol_vol = pearson(tr.a, tr.b);
            yc.vol_ret = pearson(tr.b, tr.c);
            yc.volvol_ret = pearson(tr.a, tr.c);
            yc.flagged = !(std::isfinite(yc.volvol_vol) && std::isfinite(yc.vol_ret) &&
                           std::isfinite(yc.volvol_ret));
        }
        if (!yc.flagged) {
            s1 += yc.volvol_vol;
            s2 += yc.vol_ret;
            s3 += yc.volvol_ret;
            ++used;
        }
        t.years.push_back(yc);
    }
    const double u = static_cast<double>(used);
    t.avg_volvol_vol = used ? s1 / u : nan;
    t.avg_vol_ret = used ? s2 / u : nan;
    t.avg_volvol_ret = used ? s3 / u : nan;
    return t;
}

std::pair<double, double> jarque_bera(const std::vector<double>& x) {
    if (x.size() < 3) throw InputError("Jarque-Bera needs at least 3 values");
    const Moments m = central_moments(x);
    if (!(m.m2 > 0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
    const double S = m.m3 / std::pow(m.m2, 1.5);
    const double K = m.m4 / (m.m2 * m.m2);
    const double jb = static_cast<double>(x.size()) / 6.0 * (S * S + 0.25 * (K - 3.0) * (K - 3.0));
    const boost::math::chi_squared_distribution<double> chi2(2.0);
    return {jb, boost::math::cdf(boost::math::complement(chi2, jb))};
}

std::pair<double, double> anderson_darling(const std::vector<double>& x) {
    if (x.size() < 8) throw InputError("Anderson-Darling needs at least 8 values");
    std::vector<double> z = x;
    std::sort(z.begin(), z.end());
    const Moments m = central_moments(z);
    if (!(m.m2 > 0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
    const double n = static_cast<double>(z.size());
    const double sd = std::sqrt(m.m2 * n / (n - 1.0));
    const boost::math::normal_distribution<double> z01;
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double lo = (z[i] - m.mean) / sd;
        const double hi = (z[z.size() - 1 - i] - m.mean) / sd;
        const double F = boost::math::cdf(z01, lo);
        const double G = boost::math::cdf(boost::math::complement(z01, hi));
        s += (2.0 * static_cast<double>(i) + 1.0) * (std::log(F) + std::log(G));
    }
    const double a2 = -n - s / n;
    const double a = a2 * (1.0 + 0.75 / n + 2.25 / (n * n));
    double p;
    if (a >= 0.6)
        p = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
    else if (a >= 0.34)
        p = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
    else if (a >= 0.2)
        p = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
    else
        p = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
    return {a, std::clamp(p, 0.0, 1.0)};
}

std::pair<double, double> ks_test_normal(const std::vector<double>& x) {
    if (x.size() < 5) throw InputError("Kolmogorov-Smirnov needs at least 5 values");
    std::vector<double> z = x;
    std::sort(z.begin(), z.end());
    const boost::math::normal_distribution<double> z01;
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double F = boost::math::cdf(z01, z[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
    }
    // Stephens' finite-sample scaling of the Kolmogorov limit law.
    const double sn = std::sqrt(n);
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double p = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        p += (j % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return {d, std::clamp(p, 0.0, 1.0)};
}

std::vector<LognormalityRow> lognormality_tests(const DailySeries& s, double alpha,
                                                std::size_t min_obs) {
    s.validate();
    std::string bad;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (!(s.values[i] > 0.0)) bad += (bad.empty() ? "" : ", ") + format_date(s.dates[i]);
    if (!bad.empty()) throw InputError("non-positive values on: " + bad);

    std::map<int, std::vector<double>> by_year;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        by_year[year_of(s.dates[i])].push_back(std::log(s.values[i]));
    std::vector<LognormalityRow> rows;
    for (const auto& [year, logs] : by_year) {
        LognormalityRow r;
        r.year = year;
        r.n = logs.size();
        if (logs.size() < std::max<std::size_t>(min_obs, 8)) {
            r.undersized = true;
            r.jb_stat = r.jb_p = r.ad_stat = r.ad_p = std::numeric_limits<double>::quiet_NaN();
            rows.push_back(r);
            continue;
        }
        if (is_constant(logs)) {
            r.degenerate = true;
            r.reject_jb = r.reject_ad = true;
            r.jb_stat = r.ad_stat = std::numeric_limits<double>::infinity();
            rows.push_back(r);
            continue;
        }
        std::tie(r.jb_stat, r.jb_p) = jarque_bera(logs);
        std::tie(r.ad_stat, r.ad_p) = anderson_darling(logs);
        r.reject_jb = r.jb_p < alpha;
        r.reject_ad = r.ad_p < alpha;
        rows.push_back(r);
    }
    return rows;
}

std::chrono::year_month_day parse_date(const std::string& s) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3)
        throw InputError("bad date '" + s + "' (expected YYYY-MM-DD)");
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) throw InputError("invalid calendar date '" + s + "'");
    return ymd;
}

std::string format_date(std::chrono::year_month_day d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

}  // namespace fvv
