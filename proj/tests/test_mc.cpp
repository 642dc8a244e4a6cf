#include "fvv/empirics.hpp"
#include "fvv/mc.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace fvv;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec s;
    s.n_paths = 60;
    s.fine_steps = 2340;
    s.sampling.seconds = 10.0;
    s.estimators = {EstimatorKind::FourierDebiased, EstimatorKind::FourierRaw,
                    EstimatorKind::Asj, EstimatorKind::Vetter};
    s.workers = 1;
    return s;
}

}  // namespace

TEST(Mc, PairwiseSum) {
    std::vector<double> x(1001);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
    EXPECT_EQ(pairwise_sum(x.data(), x.size()), 500500.0);
    EXPECT_EQ(pairwise_sum(x.data(), 0), 0.0);
}

TEST(Mc, MseDecomposition) {
    const ExperimentResult r = run_experiment(small_spec());
    for (std::size_t e = 0; e < r.summary.size(); ++e) {
        const EstimatorSummary& s = r.summary[e];
        ASSERT_EQ(s.n_ok, 60u);
        long double m = 0, m2 = 0;
        for (const auto& p : r.paths) m += p.estimates[e].value - p.truth;
        m /= 60;
        for (const auto& p : r.paths) {
            const long double d = p.estimates[e].value - p.truth - m;
            m2 += d * d;
        }
        m2 /= 60;  // population variance
        const double var = s.mse - s.bias * s.bias;
        EXPECT_NEAR(var, static_cast<double>(m2), 1e-9 * static_cast<double>(m2) + 1e-30);
        EXPECT_NEAR(s.bias, static_cast<double>(m), 1e-12 * std::abs(static_cast<double>(m)));
    }
}

TEST(Mc, DeterministicAcrossThreadCounts) {
    ExperimentSpec a = small_spec();
    ExperimentSpec b = a;
    b.workers = 4;
    const ExperimentResult ra = run_experiment(a), rb = run_experiment(b);
    for (std::size_t i = 0; i < ra.paths.size(); ++i) {
        EXPECT_EQ(ra.paths[i].seed, rb.paths[i].seed);
        EXPECT_EQ(ra.paths[i].truth, rb.paths[i].truth);
        for (std::size_t e = 0; e < ra.paths[i].estimates.size(); ++e)
            EXPECT_EQ(ra.paths[i].estimates[e].value, rb.paths[i].estimates[e].value);
    }
    for (std::size_t e = 0; e < ra.summary.size(); ++e) {
        EXPECT_EQ(ra.summary[e].bias, rb.summary[e].bias);
        EXPECT_EQ(ra.summary[e].mse, rb.summary[e].mse);
    }
}

TEST(Mc, CoverageCountsOnlyAvailableIntervals) {
    const ExperimentResult r = run_experiment(small_spec());
    const EstimatorSummary& s = r.summary[0];
    std::size_t n_ci = 0, hit = 0;
    for (const auto& p : r.paths) {
        const EstimateRecord& e = p.estimates[0];
        if (!e.ci_available) continue;
        ++n_ci;
        EXPECT_LE(e.ci_low, e.value);
        EXPECT_GE(e.ci_high, e.value);
        if (e.ci_low <= p.truth && p.truth <= e.ci_high) ++hit;
    }
    EXPECT_EQ(s.n_ci, n_ci);
    if (n_ci > 0) {
        EXPECT_DOUBLE_EQ(s.coverage, static_cast<double>(hit) / n_ci);
    }
    EXPECT_EQ(r.standardized_errors.size(), n_ci);
}

TEST(Mc, QQDataAgainstNormalSample) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    std::vector<double> x(10000);
    for (double& v : x) v = z(rng);
    const QQData q = qq_data(x);
    ASSERT_EQ(q.theoretical.size(), x.size());
    EXPECT_FALSE(q.degenerate);
    for (std::size_t i = 100; i < 9900; ++i) EXPECT_NEAR(q.empirical[i], q.theoretical[i], 0.1);
    EXPECT_NEAR(q.theoretical[4999] + q.theoretical[5000], 0.0, 1e-12);
    EXPECT_TRUE(qq_data(std::vector<double>(200, 1.0)).degenerate);
    EXPECT_THROW(qq_data(std::vector<double>(10, 1.0)), InputError);
}

TEST(Mc, MseShrinksWithFinerMesh) {
    ExperimentSpec s;
    s.n_paths = 100;
    s.fine_steps = 23400;
    s.workers = 0;
    const auto rows = sensitivity_cM(s, {0.05}, {1.0, 5.0, 60.0});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LT(rows[0].mse, rows[1].mse);
    EXPECT_LT(rows[1].mse, rows[2].mse);
    EXPECT_EQ(rows[0].M, 3);
    EXPECT_EQ(rows[0].n_ok, 100u);
}

TEST(Mc, SensitivityMatchesRunExperiment) {
    ExperimentSpec s = small_spec();
    s.estimators = {EstimatorKind::FourierDebiased};
    s.tuning.c_M = 0.2;
    const ExperimentResult r = run_experiment(s);
    const auto rows = sensitivity_cM(s, {0.2}, {10.0});
    EXPECT_NEAR(rows[0].mse, r.summary[0].mse, 1e-12 * r.summary[0].mse);
    EXPECT_NEAR(rows[0].bias, r.summary[0].bias, 1e-9 * std::abs(r.summary[0].bias));
}

TEST(Mc, RejectsBadSpecs) {
    ExperimentSpec s = small_spec();
    s.sampling.seconds = 7.0;
    EXPECT_THROW(run_experiment(s), InputError);
    s = small_spec();
    s.n_paths = 0;
    EXPECT_THROW(run_experiment(s), InputError);
    s = small_spec();
    s.estimators.clear();
    EXPECT_THROW(run_experiment(s), InputError);
    EXPECT_THROW(parse_model("sabr"), InputError);
    EXPECT_THROW(parse_estimator("x"), InputError);
}

TEST(Mc, PoissonSamplingRuns) {
    ExperimentSpec s;
    s.n_paths = 4;
    s.fine_steps = 23400;
    s.sampling.kind = Sampling::Kind::Poisson;
    s.sampling.seconds = 2.0;
    s.tuning.M_override = 1;
    s.workers = 1;
    const ExperimentResult r = run_experiment(s);
    EXPECT_EQ(r.summary[0].n_ok, 4u);
    for (const auto& p : r.paths) EXPECT_EQ(p.estimates[0].M, 1);
}

TEST(Mc, WriteResultsSchema) {
    ExperimentSpec s = small_spec();
    s.n_paths = 5;
    const ExperimentResult r = run_experiment(s);
    const auto dir = std::filesystem::temp_directory_path() / "fvv_mc_results";
    std::filesystem::remove_all(dir);
    write_results(r, dir.string());
    std::ifstream csv(dir / "paths.csv");
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header.rfind("path,seed,truth,n_obs,fourier", 0), 0u) << header;
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT_EQ(rows, 5);
    std::ifstream js(dir / "summary.json");
    const nlohmann::json j = nlohmann::json::parse(js);
    EXPECT_EQ(j["config"]["model"], "heston");
    EXPECT_EQ(j["config"]["n_paths"], 5);
    EXPECT_EQ(j["summary"].size(), 4u);
    EXPECT_TRUE(j.contains("version"));
    std::filesystem::remove_all(dir);
}

TEST(McOracle, CoverageAtOneSecond) {
    // 95% intervals cover the truth in 95% +- 2% of 10^4 paths.
    ExperimentSpec s;
    s.n_paths = 10000;
    const ExperimentResult r = run_experiment(s);
    EXPECT_NEAR(r.summary[0].coverage, 0.95, 0.02) << "over " << r.summary[0].n_ci << " intervals";
}

TEST(McOracle, RawStandardizedErrorsNormal) {
    ExperimentSpec s;
    s.n_paths = 1000;
    s.estimators = {EstimatorKind::FourierRaw};
    s.iota = 0.3;
    const ExperimentResult r = run_experiment(s);
    std::vector<double> z;
    for (const auto& p : r.paths) {
        const EstimateRecord& e = p.estimates[0];
        if (e.ok && e.ci_available && e.std_error > 0.0) z.push_back((e.value - p.truth) / e.std_error);
    }
    ASSERT_GE(z.size(), 900u);
    const auto [d, pval] = ks_test_normal(z);
    EXPECT_GT(pval, 0.01) << "KS D " << d;
}
