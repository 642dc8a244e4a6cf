#include "cli.hpp"

#include "fvv/empirics.hpp"
#include "fvv/io.hpp"
#include "fvv/kernel_checks.hpp"
#include "fvv/mc.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>

namespace fvv::cli {
namespace {

namespace fs = std::filesystem;

struct MonteCarloArgs {
    std::string model = "heston";
    std::string mesh = "1s";
    double poisson = 0.0;
    std::size_t paths = 1000;
    double cM = 0.05;
    int M = 0;
    bool adaptive = false;
    double c0 = 0.03, step = 0.01, threshold = 0.25;
    int max_iters = 50;
    bool previous_rule = false;
    std::vector<std::string> estimators{"fourier"};
    double beta = 0.04;
    double level = 0.95;
    double iota = 0.3;
    std::uint64_t seed = 42;
    std::size_t substeps = 1;
    std::string out;
};

void add_model_options(CLI::App* sub, MonteCarloArgs& a) {
    sub->add_option("--model", a.model, "heston or svv")->check(CLI::IsMember({"heston", "svv"}));
    sub->add_option("--paths", a.paths, "number of simulated paths");
    sub->add_option("--seed", a.seed, "master seed");
    sub->add_option("--substeps", a.substeps, "simulation steps per second");
}

ExperimentSpec to_spec(const MonteCarloArgs& a, unsigned threads) {
    ExperimentSpec s;
    s.model = parse_model(a.model);
    s.n_paths = a.paths;
    s.fine_steps = static_cast<std::size_t>(s.seconds_per_horizon) * a.substeps;
    if (a.poisson > 0.0) {
        s.sampling = {Sampling::Kind::Poisson, a.poisson};
    } else {
        s.sampling = {Sampling::Kind::Regular, parse_duration(a.mesh)};
    }
    s.estimators.clear();
    for (const auto& e : a.estimators) s.estimators.push_back(parse_estimator(e));
    s.tuning.c_M = a.cM;
    s.tuning.M_override = a.M;
    s.tuning.adaptive = a.adaptive;
    s.tuning.adaptive_cfg = {a.c0, a.step, a.threshold, a.max_iters,
                             a.previous_rule ? StopRule::RelativeToPrevious
                                             : StopRule::RelativeToInitial};
    s.beta = a.beta;
    s.level = a.level;
    s.iota = a.iota;
    s.master_seed = a.seed;
    s.workers = threads;
    return s;
}

std::string json_token(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

// Config values become leading tokens; with TakeLast, explicit flags win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config.empty() || rest.empty()) return rest;
    std::ifstream in(config);
    if (!in) throw InputError("cannot open config " + config);
    const nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw InputError("config must be a JSON object");
    // config options go right after the subcommand name
    static const std::set<std::string> subcommands{"simulate", "mc", "sensitivity",
                                                   "kernels-check", "estimate", "empirics"};
    auto at = std::find_if(rest.begin(), rest.end(),
                           [](const std::string& a) { return subcommands.count(a) > 0; });
    at = at == rest.end() ? rest.begin() : at;
    std::vector<std::string> merged(rest.begin(), at + 1);
    for (const auto& [key, value] : j.items()) {
        if (value.is_array()) {
            merged.push_back("--" + key);
            for (const auto& v : value) merged.push_back(json_token(v));
        } else if (value.is_boolean()) {
            merged.push_back("--" + key + "=" + json_token(value));
        } else {
            merged.push_back("--" + key);
            merged.push_back(json_token(value));
        }
    }
    merged.insert(merged.end(), at + 1, rest.end());
    return merged;
}

void print_summary(const ExperimentResult& r, std::ostream& out) {
    out << std::setprecision(9);
    out << "estimator,n_ok,n_failed,n_negative,bias,bias_se,mse,mse_se,coverage\n";
    for (const auto& s : r.summary)
        out << to_string(s.kind) << ',' << s.n_ok << ',' << s.n_failed << ',' << s.n_negative
            << ',' << s.bias << ',' << s.bias_se << ',' << s.mse << ',' << s.mse_se << ','
            << s.coverage << '\n';
}

int cmd_simulate(const MonteCarloArgs& a, std::ostream& out) {
    ExperimentSpec spec = to_spec(a, 0);
    spec.validate();
    if (a.out.empty()) throw InputError("--out is required");
    fs::create_directories(a.out);
    const double fine = spec.seconds_per_horizon / static_cast<double>(spec.fine_steps);
    const auto stride = static_cast<std::size_t>(std::llround(spec.sampling.seconds / fine));
    nlohmann::json summary;
    summary["version"] = library_version();
    summary["config"] = {{"model", a.model}, {"mesh_seconds", spec.sampling.seconds},
                         {"paths", a.paths}, {"seed", a.seed}, {"substeps", a.substeps}};
    summary["paths"] = nlohmann::json::array();
    for (std::size_t i = 0; i < spec.n_paths; ++i) {
        const std::uint64_t seed = derive_seed(spec.master_seed, i);
        SimPath path = spec.model == Model::Heston
                           ? simulate_heston(spec.heston, spec.fine_steps, spec.horizon, seed)
                           : simulate_svv(spec.svv, spec.fine_steps, spec.horizon, seed);
        SimPath coarse;
        coarse.horizon = path.horizon;
        coarse.true_integrated_volvol = path.true_integrated_volvol;
        for (std::size_t j = 0; j <= path.n_steps(); j += stride) {
            coarse.log_price.push_back(path.log_price[j]);
            coarse.v.push_back(path.v[j]);
            coarse.g2.push_back(path.g2[j]);
        }
        char name[32];
        std::snprintf(name, sizeof name, "path_%05zu.csv", i);
        write_path_csv(coarse, (fs::path(a.out) / name).string(), spec.seconds_per_horizon);
        summary["paths"].push_back(
            {{"file", name}, {"seed", seed}, {"true_integrated_volvol", path.true_integrated_volvol}});
    }
    std::ofstream((fs::path(a.out) / "summary.json").string()) << std::setw(2) << summary << '\n';
    out << "wrote " << spec.n_paths << " paths to " << a.out << '\n';
    return 0;
}

int cmd_mc(const MonteCarloArgs& a, unsigned threads, std::ostream& out) {
    const ExperimentResult r = run_experiment(to_spec(a, threads));
    if (!a.out.empty()) write_results(r, a.out);
    print_summary(r, out);
    return 0;
}

int cmd_sensitivity(const MonteCarloArgs& a, const std::vector<std::string>& meshes,
                    const std::vector<double>& grid, unsigned threads, std::ostream& out) {
    const ExperimentSpec spec = to_spec(a, threads);
    std::vector<double> m;
    for (const auto& s : meshes) m.push_back(parse_duration(s));
    const auto rows = sensitivity_cM(spec, grid, m);
    std::ostringstream csv;
    csv << std::setprecision(9) << "c_M,mesh_seconds,M,n_ok,bias,bias_se,mse,mse_se\n";
    for (const auto& r : rows)
        csv << r.c_M << ',' << r.mesh_seconds << ',' << r.M << ',' << r.n_ok << ',' << r.bias
            << ',' << r.bias_se << ',' << r.mse << ',' << r.mse_se << '\n';
    out << csv.str();
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream((fs::path(a.out) / "sensitivity.csv").string()) << csv.str();
        nlohmann::json j;
        j["version"] = library_version();
        j["config"] = {{"model", a.model}, {"paths", a.paths}, {"seed", a.seed},
                       {"meshes", meshes}, {"grid", grid}};
        std::ofstream((fs::path(a.out) / "summary.json").string()) << std::setw(2) << j << '\n';
    }
    return 0;
}

int cmd_kernels(const std::vector<int>& orders, double tol, double dtol, std::ostream& out) {
    KernelCheckOptions opt;
    opt.orders = orders;
    opt.integral_tol = tol;
    opt.derivative_tol = dtol;
    const auto checks = run_kernel_checks(opt);
    bool ok = true;
    out << std::setprecision(9) << "check,order,computed,expected,error,tolerance,status\n";
    for (const auto& c : checks) {
        ok = ok && c.pass;
        out << c.name << ',' << c.order << ',' << c.computed << ',' << c.expected << ','
            << c.error << ',' << c.tolerance << ',' << (c.pass ? "pass" : "FAIL") << '\n';
    }
    out << (ok ? "all kernel checks passed\n" : "kernel checks FAILED\n");
    return ok ? 0 : 1;
}

int cmd_estimate(const std::string& input, const std::string& output,
                 const DayEstimateOptions& opt, unsigned threads, std::ostream& out,
                 std::ostream& err) {
    const auto days = read_ticks_csv(input);
    if (days.empty()) throw InputError("no observations in " + input);
    std::vector<std::optional<DayEstimate>> slots(days.size());
    std::vector<std::string> why(days.size());
    parallel_for(days.size(), threads, [&](std::size_t i) {
        const auto& d = days[i];
        if (d.seconds.size() < opt.min_obs) {
            why[i] = std::to_string(d.seconds.size()) + " observations";
            return;
        }
        try {
            slots[i] = estimate_day(d, opt);
        } catch (const std::exception& ex) {
            why[i] = ex.what();
        }
    });
    std::vector<DayEstimate> rows;
    for (std::size_t i = 0; i < days.size(); ++i) {
        if (slots[i])
            rows.push_back(*slots[i]);
        else
            err << "skipping " << days[i].date << ": " << why[i] << '\n';
    }
    if (output.empty()) {
        const fs::path tmp = fs::temp_directory_path() / "fvv_estimate.csv";
        write_day_estimates_csv(rows, tmp.string());
        out << std::ifstream(tmp).rdbuf();
        fs::remove(tmp);
    } else {
        write_day_estimates_csv(rows, output);
    }
    return 0;
}

DailySeries to_daily(const DatedColumn& c, const std::string& label) {
    DailySeries s;
    s.label = label;
    for (std::size_t i = 0; i < c.dates.size(); ++i) {
        s.dates.push_back(parse_date(c.dates[i]));
        s.values.push_back(c.values[i]);
    }
    s.validate();
    return s;
}

int cmd_empirics(const std::string& input, const std::string& dir, int max_lag,
                 std::size_t min_days, std::ostream& out) {
    if (dir.empty()) throw InputError("--out is required");
    fs::create_directories(dir);
    const DailySeries vv = to_daily(read_dated_column(input, "integrated_volvol"), "volvol");
    const DailySeries var = to_daily(read_dated_column(input, "integrated_variance"), "variance");
    const DailySeries ret = to_daily(read_dated_column(input, "daily_return"), "return");
    const auto p = [&](const char* name) { return (fs::path(dir) / name).string(); };

    {
        std::ofstream f(p("sample_stats.csv"));
        f << std::setprecision(9) << "series,n,mean,median,std_dev,skewness,kurtosis,min,max\n";
        for (const DailySeries* s : {&vv, &var, &ret}) {
            const SampleStats st = sample_stats(s->values);
            f << s->label << ',' << st.n << ',' << st.mean << ',' << st.median << ','
              << st.std_dev << ',' << st.skewness << ',' << st.kurtosis << ',' << st.min << ','
              << st.max << '\n';
        }
    }
    {
        // keep the lag count admissible for short samples
        const std::size_t n = std::min(vv.values.size(), var.values.size());
        const int lags = std::min<int>(max_lag, static_cast<int>((n - 1) / 4));
        const auto a1 = acf(vv.values, lags), a2 = acf(var.values, lags);
        std::ofstream f(p("acf.csv"));
        f << std::setprecision(9) << "lag,volvol,variance,band_volvol,band_variance\n";
        for (std::size_t k = 0; k < a1.size(); ++k)
            f << a1[k].lag << ',' << a1[k].value << ',' << a2[k].value << ',' << a1[k].band << ','
              << a2[k].band << '\n';
    }
    {
        const auto c = yearly_correlations(vv, var, ret, min_days);
        std::ofstream f(p("correlations.csv"));
        f << std::setprecision(9)
          << "year,n_common,volvol_variance,variance_return,volvol_return,flagged\n";
        for (const auto& y : c.years)
            f << y.year << ',' << y.n_common << ',' << y.volvol_vol << ',' << y.vol_ret << ','
              << y.volvol_ret << ',' << (y.flagged ? 1 : 0) << '\n';
        f << "average,," << c.avg_volvol_vol << ',' << c.avg_vol_ret << ',' << c.avg_volvol_ret
          << ",\n";
    }
    {
        std::ofstream f(p("lognormality.csv"));
        f << std::setprecision(9)
          << "series,year,n,jb_stat,jb_p,reject_jb,ad_stat,ad_p,reject_ad,degenerate,undersized\n";
        for (const DailySeries* s : {&vv, &var}) {
            DailySeries pos;
            pos.label = s->label;
            for (std::size_t i = 0; i < s->values.size(); ++i)
                if (s->values[i] > 0.0) {
                    pos.dates.push_back(s->dates[i]);
                    pos.values.push_back(s->values[i]);
                }
            for (const auto& r : lognormality_tests(pos))
                f << s->label << ',' << r.year << ',' << r.n << ',' << r.jb_stat << ',' << r.jb_p
                  << ',' << r.reject_jb << ',' << r.ad_stat << ',' << r.ad_p << ','
                  << r.reject_ad << ',' << r.degenerate << ',' << r.undersized << '\n';
        }
    }
    out << "wrote sample_stats.csv, acf.csv, correlations.csv, lognormality.csv to " << dir << '\n';
    return 0;
}

}  // namespace

double parse_duration(const std::string& s) {
    if (s.empty()) throw InputError("empty duration");
    double scale = 1.0;
    std::string num = s;
    const char unit = s.back();
    if (unit == 's') {
        num.pop_back();
    } else if (unit == 'm') {
        scale = 60.0;
        num.pop_back();
    } else if (unit == 'h') {
        scale = 3600.0;
        num.pop_back();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(num, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != num.size() || !(v > 0.0)) throw InputError("bad duration '" + s + "'");
    return v * scale;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fourier estimation of integrated volatility of volatility"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (default FVV_THREADS or all cores)");

    MonteCarloArgs a;

    auto* sim = app.add_subcommand("simulate", "write simulated paths as CSV");
    add_model_options(sim, a);
    sim->add_option("--mesh", a.mesh, "sampling mesh, e.g. 1s, 5m");
    sim->add_option("--out", a.out, "output directory")->required();

    auto* mc = app.add_subcommand("mc", "Monte Carlo study of the estimators");
    add_model_options(mc, a);
    mc->add_option("--mesh", a.mesh, "regular sampling mesh, e.g. 1s, 5m");
    mc->add_option("--poisson", a.poisson, "mean Poisson duration in seconds (overrides --mesh)");
    mc->add_option("--cM", a.cM, "c_M in M = floor(c_M rho^{-1/2})");
    mc->add_option("--M", a.M, "fixed cutting frequency M");
    mc->add_flag("--adaptive", a.adaptive, "adaptive c_M selection per path");
    mc->add_option("--c0", a.c0);
    mc->add_option("--step", a.step);
    mc->add_option("--threshold", a.threshold);
    mc->add_option("--max-iters", a.max_iters);
    mc->add_flag("--relative-to-previous", a.previous_rule,
                 "adaptive stop rule relative to the previous standard error");
    mc->add_option("--estimators", a.estimators, "fourier, fourier_raw, asj, vetter")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->delimiter(',');
    mc->add_option("--beta", a.beta, "window constant for asj and vetter");
    mc->add_option("--level", a.level, "confidence level");
    mc->add_option("--iota", a.iota, "rate exponent of the raw estimator");
    mc->add_option("--out", a.out, "output directory for paths.csv and summary.json");

    std::vector<std::string> meshes{"1s"};
    std::vector<double> grid{0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09};
    auto* sens = app.add_subcommand("sensitivity", "MSE over a c_M grid with common paths");
    add_model_options(sens, a);
    sens->add_option("--meshes", meshes)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sens->add_option("--grid", grid)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sens->add_option("--out", a.out, "output directory");

    std::vector<int> orders{1, 8, 16, 32, 64, 128};
    double tol = 1e-8, dtol = 1e-6;
    auto* kc = app.add_subcommand("kernels-check", "verify Fejer and Dirichlet kernel identities");
    kc->add_option("--orders", orders)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    kc->add_option("--tolerance", tol, "tolerance for every identity")
        ->each([&](const std::string& v) { dtol = std::stod(v); });
    kc->add_option("--derivative-tolerance", dtol, "tolerance for derivative identities only");

    std::string input, output;
    DayEstimateOptions dopt;
    auto* est = app.add_subcommand("estimate", "daily vol-of-vol from tick data");
    est->add_option("--input", input, "CSV with timestamp,price[,date]")->required();
    est->add_option("--output", output, "output CSV (stdout if omitted)");
    est->add_option("--cM", dopt.c_M);
    est->add_flag("--adaptive", dopt.adaptive);
    est->add_option("--level", dopt.level);
    est->add_option("--horizon", dopt.horizon, "window length in years");
    est->add_option("--min-obs", dopt.min_obs);

    int max_lag = 50;
    std::size_t min_days = 30;
    auto* emp = app.add_subcommand("empirics", "stylized facts of daily estimates");
    emp->add_option("--input", input, "CSV written by the estimate command")->required();
    emp->add_option("--out", output, "output directory")->required();
    emp->add_option("--max-lag", max_lag);
    emp->add_option("--min-days", min_days);

    try {
        std::vector<std::string> args = merge_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*sim) return cmd_simulate(a, out);
        if (*mc) return cmd_mc(a, threads, out);
        if (*sens) return cmd_sensitivity(a, meshes, grid, threads, out);
        if (*kc) return cmd_kernels(orders, tol, dtol, out);
        if (*est) return cmd_estimate(input, output, dopt, threads, out, err);
        if (*emp) return cmd_empirics(input, output, max_lag, min_days, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace fvv::cli
