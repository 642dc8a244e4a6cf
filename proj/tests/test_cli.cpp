#include "cli.hpp"
#include "fvv/simulate.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = fvv::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST(Cli, ParseDuration) {
    EXPECT_EQ(fvv::cli::parse_duration("1s"), 1.0);
    EXPECT_EQ(fvv::cli::parse_duration("5m"), 300.0);
    EXPECT_EQ(fvv::cli::parse_duration("2.5"), 2.5);
    EXPECT_EQ(fvv::cli::parse_duration("1h"), 3600.0);
    EXPECT_THROW(fvv::cli::parse_duration("abc"), fvv::InputError);
    EXPECT_THROW(fvv::cli::parse_duration("-1s"), fvv::InputError);
    EXPECT_THROW(fvv::cli::parse_duration(""), fvv::InputError);
}

TEST(Cli, Version) {
    const CliResult r = run({"--version"});
    EXPECT_EQ(r.code, 0);
    EXPECT_FALSE(r.out.empty());
}

TEST(Cli, KernelsCheck) {
    EXPECT_EQ(run({"kernels-check"}).code, 0);
    const CliResult tampered = run({"kernels-check", "--tolerance", "1e-16"});
    EXPECT_NE(tampered.code, 0);
    EXPECT_NE(tampered.out.find("FAIL"), std::string::npos);
    EXPECT_NE(run({"kernels-check", "--orders", "1"}).out.find(",1,"), std::string::npos);
}

TEST(Cli, EstimateEmptyInput) {
    const fs::path f = tmp("fvv_cli_empty.csv");
    std::ofstream(f) << "timestamp,price\n";
    const CliResult r = run({"estimate", "--input", f.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("no observations"), std::string::npos);
}

TEST(Cli, EstimateMalformed) {
    const fs::path f = tmp("fvv_cli_bad.csv");
    std::ofstream(f) << "timestamp,price\n0,1\n1,x\n";
    const CliResult r = run({"estimate", "--input", f.string()});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find(":3:"), std::string::npos);
}

TEST(Cli, EstimateSkipsShortDaysAndEmpirics) {
    // 60 business days of 5-minute ticks plus one short day.
    const fs::path f = tmp("fvv_cli_ticks.csv");
    {
        std::ofstream o(f);
        o << "timestamp,price,date\n";
        for (int d = 0; d < 60; ++d) {
            const fvv::SimPath p = fvv::simulate_heston(fvv::HestonParams{}, 78, fvv::kTradingDay, d);
            char date[16];
            std::snprintf(date, sizeof date, "2019-%02d-%02d", 1 + d / 28, 1 + d % 28);
            for (int i = 0; i <= 78; ++i)
                o << 34200 + 300 * i << ',' << std::exp(p.log_price[i]) << ',' << date << '\n';
        }
        o << "1,100,2019-12-30\n2,101,2019-12-30\n";
    }
    const fs::path est = tmp("fvv_cli_est.csv");
    const CliResult r = run({"--threads", "3", "estimate", "--input", f.string(), "--output", est.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("skipping 2019-12-30"), std::string::npos);
    const std::string body = slurp(est);
    EXPECT_EQ(body.rfind("date,n_obs,N,M,c_M,integrated_volvol,std_error,ci_low,ci_high,negative_flag", 0), 0u);
    EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 61);

    const fs::path dir = tmp("fvv_cli_emp");
    fs::remove_all(dir);
    const CliResult e = run({"empirics", "--input", est.string(), "--out", dir.string(), "--max-lag", "10"});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(slurp(dir / "sample_stats.csv").substr(0, 10), "series,n,m");
    EXPECT_EQ(slurp(dir / "acf.csv").rfind("lag,volvol,variance", 0), 0u);
    EXPECT_NE(slurp(dir / "correlations.csv").find("average"), std::string::npos);
    EXPECT_EQ(slurp(dir / "lognormality.csv").rfind("series,year,n,jb_stat", 0), 0u);
}

TEST(Cli, SimulateDeterministic) {
    const fs::path a = tmp("fvv_cli_sim_a"), b = tmp("fvv_cli_sim_b");
    fs::remove_all(a);
    fs::remove_all(b);
    for (const auto& d : {a, b})
        ASSERT_EQ(run({"simulate", "--paths", "2", "--seed", "7", "--mesh", "5m", "--out", d.string()}).code, 0);
    EXPECT_EQ(slurp(a / "path_00001.csv"), slurp(b / "path_00001.csv"));
    EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
    const auto j = nlohmann::json::parse(slurp(a / "summary.json"));
    EXPECT_EQ(j["config"]["seed"], 7);
}

TEST(Cli, McConfigMergeFlagsWin) {
    const fs::path cfg = tmp("fvv_cli_cfg.json");
    std::ofstream(cfg) << R"({"paths": 3, "mesh": "5m", "seed": 11, "model": "svv"})";
    const fs::path dir = tmp("fvv_cli_mc");
    fs::remove_all(dir);
    const CliResult r = run({"mc", "--config", cfg.string(), "--seed", "12", "--out", dir.string(),
                       "--estimators", "fourier,asj"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(j["config"]["n_paths"], 3);
    EXPECT_EQ(j["config"]["master_seed"], 12);
    EXPECT_EQ(j["config"]["model"], "svv");
    EXPECT_EQ(j["summary"].size(), 2u);
}

TEST(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(run({"mc", "--paths", "2", "--mesh", "7s"}).code, 2);
    EXPECT_EQ(run({"mc", "--paths", "2", "--mesh", "bogus"}).code, 2);
    EXPECT_NE(run({"mc", "--model", "sabr"}).code, 0);
    EXPECT_NE(run({}).code, 0);
}
