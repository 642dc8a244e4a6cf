#include "criteria.hpp"

#include "oracle.hpp"
#include "properties.hpp"

#include "fvv/empirics.hpp"
#include "fvv/fourier_core.hpp"
#include "fvv/kernel_checks.hpp"
#include "fvv/mc.hpp"
#include "fvv/tuning.hpp"
#include "fvv/volvol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace fvv::acceptance {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const EstimatorSummary& summary_of(const ExperimentResult& r, EstimatorKind k) {
    for (const auto& s : r.summary)
        if (s.kind == k) return s;
    throw std::runtime_error("estimator missing from summary");
}

// Bias within 3 Monte Carlo SE of the target and MSE within a factor 2.
Outcome table_check(const char* label, const EstimatorSummary& s, double bias_ref, double mse_ref) {
    const bool bias_ok = std::abs(s.bias - bias_ref) <= 3.0 * s.bias_se;
    const bool mse_ok = s.mse >= mse_ref / 2.0 && s.mse <= 2.0 * mse_ref;
    return {bias_ok && mse_ok,
            fmt("%s bias %.4g (se %.3g, target %.4g, %s) mse %.4g (target %.4g, %s) n_ok %zu",
                label, s.bias, s.bias_se, bias_ref, bias_ok ? "ok" : "off", s.mse, mse_ref,
                mse_ok ? "ok" : "off", s.n_ok)};
}

ExperimentSpec heston_spec(std::size_t paths, double mesh_seconds) {
    ExperimentSpec s;
    s.model = Model::Heston;
    s.n_paths = paths;
    s.sampling = {Sampling::Kind::Regular, mesh_seconds};
    s.tuning.c_M = 0.05;
    return s;
}

}  // namespace

Outcome kernel_identities() {
    const auto t0 = Clock::now();
    KernelCheckOptions opt;
    opt.orders = {8, 16, 32, 64, 128};
    opt.integral_tol = 1e-8;
    opt.derivative_tol = 1e-6;
    const auto checks = run_kernel_checks(opt);
    int failed = 0;
    std::string first;
    for (const auto& c : checks)
        if (!c.pass && failed++ == 0) first = fmt(" first failure %s M=%d err %.3g", c.name.c_str(), c.order, c.error);
    const double secs = seconds_since(t0);
    return {failed == 0 && secs < 10.0 && !checks.empty(),
            fmt("%zu identities, %d failed, %.2f s (limit 10 s)", checks.size(), failed, secs) + first};
}

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len(100, 2000);
    double worst_dp = 0.0, worst_v = 0.0;
    for (int p = 0; p < 50; ++p) {
        const std::size_t n = len(rng);
        const PriceSeries s = oracle::random_walk(n, rng(), 1e-3);
        const EstimatorConfig cfg = EstimatorConfig::for_series(s, select_M(s, 0.05));
        const int kv = required_v_range(cfg);
        const int kd = cfg.N + kv;
        const CoeffArray dp = coeffs_dp(s, kd);
        const CoeffArray vc = coeffs_v(dp, cfg.N, kv);
        const auto dref = oracle::dp_coeffs(s, kd);
        const auto vref = oracle::v_coeffs(dref, kd, cfg.N, kv);
        double dmax = 0.0, vmax = 0.0, derr = 0.0, verr = 0.0;
        for (const auto& z : dref) dmax = std::max(dmax, std::abs(z));
        for (const auto& z : vref) vmax = std::max(vmax, std::abs(z));
        for (int k = -kd; k <= kd; ++k)
            derr = std::max(derr, std::abs(dp[k] - dref[static_cast<std::size_t>(k + kd)]));
        for (int k = -kv; k <= kv; ++k)
            verr = std::max(verr, std::abs(vc[k] - vref[static_cast<std::size_t>(k + kv)]));
        worst_dp = std::max(worst_dp, derr / dmax);
        worst_v = std::max(worst_v, verr / vmax);
    }
    const double secs = seconds_since(t0);
    return {worst_dp <= 1e-12 && worst_v <= 1e-12 && secs < 30.0,
            fmt("50 paths: max rel err dp %.3g, v %.3g (limit 1e-12), %.1f s (limit 30 s)",
                worst_dp, worst_v, secs)};
}

Outcome table1_reproduction() {
    const auto t0 = Clock::now();
    ExperimentSpec h = heston_spec(1000, 1.0);
    const ExperimentResult rh = run_experiment(h);
    ExperimentSpec v = h;
    v.model = Model::Svv;
    const ExperimentResult rv = run_experiment(v);
    const Outcome a = table_check("heston", summary_of(rh, EstimatorKind::FourierDebiased),
                                  -1.833e-7, 4.229e-10);
    const Outcome b = table_check("svv", summary_of(rv, EstimatorKind::FourierDebiased),
                                  3.644e-7, 6.199e-9);
    const double secs = seconds_since(t0);
    return {a.pass && b.pass && secs < 1800.0,
            a.detail + "; " + b.detail + fmt("; %.0f s (limit 1800 s)", secs)};
}

Outcome baseline_inferiority() {
    ExperimentSpec s = heston_spec(500, 60.0);
    s.estimators = {EstimatorKind::FourierDebiased, EstimatorKind::Asj};
    s.beta = 0.04;
    const ExperimentResult r = run_experiment(s);
    const double mf = summary_of(r, EstimatorKind::FourierDebiased).mse;
    const double ma = summary_of(r, EstimatorKind::Asj).mse;
    return {ma > 10.0 * mf, fmt("mse asj %.4g, fourier %.4g, ratio %.1f (need > 10)", ma, mf, ma / mf)};
}

Outcome clt_normality() {
    const ExperimentResult r = run_experiment(heston_spec(1000, 5.0));
    const EstimatorSummary& s = summary_of(r, EstimatorKind::FourierDebiased);
    if (r.standardized_errors.size() < 5) return {false, "too few standardized errors"};
    const auto [d, p] = ks_test_normal(r.standardized_errors);
    const bool ks_ok = p > 0.01;
    const bool cov_ok = s.coverage >= 0.92 && s.coverage <= 0.98;
    return {ks_ok && cov_ok,
            fmt("KS D %.4f p %.4g (need > 0.01), coverage %.3f over %zu intervals (need [0.92, 0.98])",
                d, p, s.coverage, s.n_ci)};
}

Outcome cM_sensitivity() {
    const std::vector<double> grid{0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09};
    std::string detail;
    bool ok = true;
    for (const auto& [model, target] :
         {std::pair{Model::Heston, std::vector<double>{0.04, 0.05, 0.06}},
          std::pair{Model::Svv, std::vector<double>{0.06, 0.07}}}) {
        ExperimentSpec s = heston_spec(400, 1.0);
        s.model = model;
        const auto rows = sensitivity_cM(s, grid, {1.0});
        double best = rows.front().mse;
        for (const auto& r : rows) best = std::min(best, r.mse);
        // Grid points sharing the same M give identical MSE; every minimizer must be in range.
        std::string mins;
        bool in_target = true;
        for (const auto& r : rows) {
            if (r.mse != best) continue;
            mins += fmt("%s%.2f(M=%d)", mins.empty() ? "" : ",", r.c_M, r.M);
            in_target = in_target && std::any_of(target.begin(), target.end(),
                                                 [&](double t) { return std::abs(t - r.c_M) < 1e-9; });
        }
        ok = ok && in_target;
        detail += fmt("%s argmin {%s} mse %.4g %s; ", to_string(model).c_str(), mins.c_str(), best,
                      in_target ? "in range" : "out of range");
    }
    return {ok, detail};
}

Outcome poisson_sampling() {
    // M* is the cutting frequency of the 1-second regular grid at c_M = 0.05.
    const int M_star = select_M(23400, 0.05);
    ExperimentSpec s = heston_spec(1000, 2.0);
    s.sampling = {Sampling::Kind::Poisson, 2.0};
    s.fine_steps = 234000;
    s.tuning.M_override = std::max(1, M_star / 2);
    const ExperimentResult r = run_experiment(s);
    Outcome o = table_check("heston poisson", summary_of(r, EstimatorKind::FourierDebiased),
                            -1.910e-7, 6.888e-10);
    double obs = 0.0;
    for (const auto& p : r.paths) obs += static_cast<double>(p.n_obs);
    o.detail += fmt(" M %d, mean observations %.0f", s.tuning.M_override, obs / r.paths.size());
    return o;
}

Outcome property_suite() {
    const auto t0 = Clock::now();
    const auto results = props::run_property_suite(200, 97);
    bool ok = true;
    std::string detail;
    for (const auto& r : results) {
        ok = ok && r.failures == 0 && r.cases >= 100;
        detail += fmt("%s %d/%d; ", r.name.c_str(), r.cases - r.failures, r.cases);
        if (r.failures) detail += "first failure " + r.first_failure + "; ";
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 60.0, detail + fmt("%.1f s (limit 60 s)", secs)};
}

namespace {

std::vector<double> normals(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z;
    std::vector<double> x(n);
    for (double& v : x) v = z(rng);
    return x;
}

DailySeries dated(const std::vector<double>& v, int year) {
    using namespace std::chrono;
    DailySeries s;
    const sys_days start{std::chrono::year{year} / 1 / 1};
    for (std::size_t i = 0; i < v.size(); ++i) {
        s.dates.push_back(year_month_day{start + days{static_cast<int>(i)}});
        s.values.push_back(v[i]);
    }
    return s;
}

DailySeries concat(const DailySeries& a, const DailySeries& b) {
    DailySeries s = a;
    s.dates.insert(s.dates.end(), b.dates.begin(), b.dates.end());
    s.values.insert(s.values.end(), b.values.begin(), b.values.end());
    return s;
}

// Two simulated Heston years; daily estimates from the 1-second grid.
CorrelationTable heston_years(std::uint64_t seed) {
    const HestonParams base;
    std::vector<double> vv, iv, ret;
    double v0 = base.v0;
    for (int d = 0; d < 2 * 252; ++d) {
        HestonParams p = base;
        p.v0 = v0;
        const SimPath path = simulate_heston(p, 23400, kTradingDay, derive_seed(seed, d));
        v0 = path.v.back();
        const PriceSeries s = sample_regular(path, 1);
        const EstimatorConfig cfg = EstimatorConfig::for_series(s, select_M(s, 0.05));
        const int kv = required_v_range(cfg);
        const CoeffArray vc = coeffs_v(coeffs_dp(s, cfg.N + kv), cfg.N, kv);
        vv.push_back(to_calendar_volvol(volvol_debiased(vc, cfg).integrated_volvol, kTradingDay));
        iv.push_back(kTwoPi * vc[0].real());
        ret.push_back(path.log_price.back() - path.log_price.front());
    }
    auto split = [](const std::vector<double>& x) {
        return concat(dated({x.begin(), x.begin() + 252}, 2001), dated({x.begin() + 252, x.end()}, 2002));
    };
    return yearly_correlations(split(vv), split(iv), split(ret));
}

}  // namespace

Outcome empirics_statistics() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(31337);
    std::vector<std::string> failed;
    std::string sign_detail;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) failed.push_back(what);
    };

    // sample_stats: hand values and constant series
    const SampleStats two = sample_stats({0.0, 1.0});
    expect(two.mean == 0.5 && std::abs(two.std_dev - std::sqrt(0.5)) < 1e-15, "two-point stats");
    const SampleStats cst = sample_stats(std::vector<double>(20, 2.5));
    expect(cst.mean == 2.5 && cst.median == 2.5 && cst.std_dev == 0.0 && !cst.shape_defined &&
               cst.min == 2.5 && cst.max == 2.5,
           "constant-series stats");
    const SampleStats big = sample_stats(normals(rng, 200000));
    expect(std::abs(big.kurtosis - 3.0) < 0.05 && std::abs(big.skewness) < 0.03, "normal moments");

    // acf: lag 0, AR(1) and white-noise band coverage
    {
        std::normal_distribution<double> z;
        std::vector<double> x(3000);
        x[0] = z(rng);
        for (std::size_t i = 1; i < x.size(); ++i) x[i] = 0.9 * x[i - 1] + z(rng);
        const auto a = acf(x, 10);
        expect(a[0].value == 1.0, "acf lag 0");
        expect(std::abs(a[1].value - 0.9) < 0.05, fmt("AR(1) acf %.3f", a[1].value));
        int good_runs = 0;
        for (int run = 0; run < 100; ++run) {
            const auto w = acf(normals(rng, 1000), 20);
            int out = 0;
            for (int k = 1; k <= 20; ++k) out += std::abs(w[k].value) > w[k].band;
            good_runs += out <= 2;  // at most 10% of lags outside
        }
        // P(Binomial(20, 0.05) <= 2) = 0.925; demand 85 of 100 runs.
        expect(good_runs >= 85, fmt("white-noise band runs %d/100", good_runs));
    }

    // yearly_correlations: identity, independence and the in-model sign
    {
        const auto x = normals(rng, 250);
        const DailySeries s = dated(x, 2005);
        const CorrelationTable t = yearly_correlations(s, s, s);
        expect(std::abs(t.years[0].volvol_vol - 1.0) < 1e-12, "corr(x, x)");
        int small = 0;
        for (int run = 0; run < 200; ++run) {
            const CorrelationTable u = yearly_correlations(dated(normals(rng, 250), 2005),
                                                           dated(normals(rng, 250), 2005),
                                                           dated(normals(rng, 250), 2005));
            small += std::abs(u.years[0].volvol_vol) < 0.15;
        }
        expect(small >= 180, fmt("independent |corr| < 0.15 in %d/200 runs", small));
        const CorrelationTable h = heston_years(555);
        // Sign oracle: each year positive and significant at 1% (Fisher z, one-sided).
        bool pos = h.years.size() == 2;
        std::string per_year;
        for (const auto& y : h.years) {
            const double z = std::atanh(y.volvol_vol) * std::sqrt(static_cast<double>(y.n_common) - 3.0);
            pos = pos && !y.flagged && z > 2.326;
            per_year += fmt(" %d: %.3f (z %.1f)", y.year, y.volvol_vol, z);
        }
        expect(pos, "heston corr(volvol, vol)" + per_year);
        sign_detail = "heston corr(volvol, vol)" + per_year;
    }

    // lognormality_tests: size, power, degenerate
    {
        std::normal_distribution<double> z;
        std::exponential_distribution<double> ex(1.0);
        int size_rej = 0, pow_rej = 0;
        for (int run = 0; run < 1000; ++run) {
            std::vector<double> ln(250);
            for (double& v : ln) v = std::exp(z(rng));
            size_rej += lognormality_tests(dated(ln, 2010))[0].reject_ad;
        }
        for (int run = 0; run < 200; ++run) {
            std::vector<double> ep(250);
            for (double& v : ep) v = std::exp(ex(rng));
            pow_rej += lognormality_tests(dated(ep, 2010))[0].reject_ad;
        }
        // 1000 draws at 5%: binomial 99.9% band is about [29, 73].
        expect(size_rej >= 29 && size_rej <= 73, fmt("size %d/1000", size_rej));
        expect(pow_rej > 100, fmt("power %d/200", pow_rej));
        const auto deg = lognormality_tests(dated(std::vector<double>(40, 3.0), 2010));
        expect(deg[0].degenerate && deg[0].reject_ad && deg[0].reject_jb, "degenerate rejection");
    }

    const double secs = seconds_since(t0);
    std::string detail = sign_detail + fmt("; %.1f s (limit 300 s)", secs);
    for (const auto& f : failed) detail += "; failed: " + f;
    return {failed.empty() && secs < 300.0, detail};
}

}  // namespace fvv::acceptance
