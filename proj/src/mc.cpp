#include "fvv/mc.hpp"

#include "fvv/baselines.hpp"
#include "fvv/fourier_core.hpp"

#include <json.hpp>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <thread>

#ifndef FVV_VERSION_STRING
#define FVV_VERSION_STRING "unknown"
#endif

namespace fvv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SimPath simulate(const ExperimentSpec& spec, std::uint64_t seed) {
    return spec.model == Model::Heston
               ? simulate_heston(spec.heston, spec.fine_steps, spec.horizon, seed)
               : simulate_svv(spec.svv, spec.fine_steps, spec.horizon, seed);
}

std::size_t stride_for(const ExperimentSpec& spec, double mesh_seconds) {
    const double fine = spec.seconds_per_horizon / static_cast<double>(spec.fine_steps);
    const double ratio = mesh_seconds / fine;
    const auto stride = static_cast<std::size_t>(std::llround(ratio));
    if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio ||
        spec.fine_steps % stride != 0)
        throw InputError("mesh of " + std::to_string(mesh_seconds) +
                         " s is not a divisor-multiple of the simulation grid");
    return stride;
}

PriceSeries observe(const ExperimentSpec& spec, const SimPath& path, std::uint64_t seed) {
    if (spec.sampling.kind == Sampling::Kind::Poisson)
        return poisson_resample(path, spec.sampling.seconds, derive_seed(seed, 1),
                                spec.seconds_per_horizon);
    return sample_regular(path, stride_for(spec, spec.sampling.seconds));
}

struct MeanAndSe {
    double mean = kNaN;
    double se = kNaN;
};

MeanAndSe mean_and_se(const std::vector<double>& x) {
    MeanAndSe r;
    if (x.empty()) return r;
    const double n = static_cast<double>(x.size());
    r.mean = pairwise_sum(x.data(), x.size()) / n;
    if (x.size() < 2) return r;
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - r.mean) * (x[i] - r.mean);
    r.se = std::sqrt(pairwise_sum(d.data(), d.size()) / (n - 1.0) / n);
    return r;
}

void run_fourier(const ExperimentSpec& spec, const PriceSeries& series, PathRecord& rec) {
    int M = 0;
    double c_M = spec.tuning.c_M;
    if (spec.tuning.M_override > 0) {
        M = spec.tuning.M_override;
    } else if (spec.tuning.adaptive) {
        const AdaptiveResult a = adaptive_cM(series, spec.tuning.adaptive_cfg);
        c_M = a.c_M;
        M = a.M;
    } else {
        M = select_M(series, c_M);
    }
    EstimatorConfig cfg = EstimatorConfig::for_series(series, M);
    cfg.iota = spec.iota;
    const CoeffArray dp = coeffs_dp(series, cfg.N + required_v_range(cfg));
    const CoeffArray vc = coeffs_v(dp, cfg.N, required_v_range(cfg));
    const double f = volvol_unit_factor(series.horizon());

    for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
        const EstimatorKind kind = spec.estimators[e];
        if (kind != EstimatorKind::FourierDebiased && kind != EstimatorKind::FourierRaw) continue;
        EstimateRecord& r = rec.estimates[e];
        try {
            const VolvolEstimate full = estimate_with_ci(
                vc, cfg, kind == EstimatorKind::FourierDebiased, spec.level);
            r.value = f * full.integrated_volvol;
            r.negative = full.negative;
            r.ci_available = full.variance_available;
            if (full.variance_available) {
                r.std_error = f * kTwoPi * full.std_error;
                r.ci_low = f * full.ci_low;
                r.ci_high = f * full.ci_high;
            }
            r.M = M;
            r.c_M = c_M;
            r.ok = std::isfinite(r.value);
        } catch (const std::exception& ex) {
            r.failure = ex.what();
        }
    }
}

PathRecord run_path(const ExperimentSpec& spec, std::size_t index) {
    PathRecord rec;
    rec.index = index;
    rec.seed = derive_seed(spec.master_seed, index);
    rec.estimates.resize(spec.estimators.size());
    const SimPath path = simulate(spec, rec.seed);
    rec.truth = path.true_integrated_volvol;
    const PriceSeries series = observe(spec, path, rec.seed);
    rec.n_obs = series.size();

    const bool any_fourier =
        std::any_of(spec.estimators.begin(), spec.estimators.end(), [](EstimatorKind k) {
            return k == EstimatorKind::FourierDebiased || k == EstimatorKind::FourierRaw;
        });
    if (any_fourier) {
        try {
            run_fourier(spec, series, rec);
        } catch (const std::exception& ex) {
            for (std::size_t e = 0; e < spec.estimators.size(); ++e)
                if (spec.estimators[e] == EstimatorKind::FourierDebiased ||
                    spec.estimators[e] == EstimatorKind::FourierRaw)
                    rec.estimates[e].failure = ex.what();
        }
    }
    for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
        const EstimatorKind kind = spec.estimators[e];
        if (kind != EstimatorKind::Asj && kind != EstimatorKind::Vetter) continue;
        EstimateRecord& r = rec.estimates[e];
        try {
            r.kappa = window_length(series, spec.beta);
            r.value = kind == EstimatorKind::Asj ? asj_estimator_kappa(series, r.kappa)
                                                 : vetter_estimator_kappa(series, r.kappa);
            r.ok = std::isfinite(r.value);
            r.negative = r.value < 0.0;
        } catch (const std::exception& ex) {
            r.failure = ex.what();
        }
    }
    return rec;
}

EstimatorSummary summarize(const std::vector<PathRecord>& paths, std::size_t e,
                           EstimatorKind kind) {
    EstimatorSummary s;
    s.kind = kind;
    std::vector<double> err, sq;
    std::size_t covered = 0;
    for (const auto& p : paths) {
        const EstimateRecord& r = p.estimates[e];
        if (!r.ok) {
            ++s.n_failed;
            continue;
        }
        ++s.n_ok;
        if (r.negative) ++s.n_negative;
        const double d = r.value - p.truth;
        err.push_back(d);
        sq.push_back(d * d);
        if (r.ci_available) {
            ++s.n_ci;
            if (r.ci_low <= p.truth && p.truth <= r.ci_high) ++covered;
        }
    }
    const MeanAndSe b = mean_and_se(err);
    const MeanAndSe m = mean_and_se(sq);
    s.bias = b.mean;
    s.bias_se = b.se;
    s.mse = m.mean;
    s.mse_se = m.se;
    if (s.n_ci > 0) s.coverage = static_cast<double>(covered) / static_cast<double>(s.n_ci);
    return s;
}

nlohmann::json spec_json(const ExperimentSpec& s) {
    nlohmann::json j;
    j["model"] = to_string(s.model);
    if (s.model == Model::Heston)
        j["params"] = {{"mu", s.heston.mu},       {"theta", s.heston.theta},
                       {"alpha", s.heston.alpha}, {"gamma", s.heston.gamma},
                       {"rho", s.heston.rho},     {"p0", s.heston.p0},
                       {"v0", s.heston.v0}};
    else
        j["params"] = {{"mu", s.svv.mu},       {"theta", s.svv.theta}, {"alpha", s.svv.alpha},
                       {"chi", s.svv.chi},     {"eta_bar", s.svv.eta_bar},
                       {"xi", s.svv.xi},       {"rho", s.svv.rho},     {"p0", s.svv.p0},
                       {"v0", s.svv.v0},       {"g0", s.svv.g0}};
    j["n_paths"] = s.n_paths;
    j["fine_steps"] = s.fine_steps;
    j["horizon"] = s.horizon;
    j["seconds_per_horizon"] = s.seconds_per_horizon;
    j["sampling"] = {{"kind", s.sampling.kind == Sampling::Kind::Regular ? "regular" : "poisson"},
                     {"seconds", s.sampling.seconds}};
    std::vector<std::string> est;
    for (auto k : s.estimators) est.push_back(to_string(k));
    j["estimators"] = est;
    j["tuning"] = {{"c_M", s.tuning.c_M},
                   {"M_override", s.tuning.M_override},
                   {"adaptive", s.tuning.adaptive},
                   {"c0", s.tuning.adaptive_cfg.c0},
                   {"step", s.tuning.adaptive_cfg.step},
                   {"threshold", s.tuning.adaptive_cfg.threshold},
                   {"max_iters", s.tuning.adaptive_cfg.max_iters}};
    j["beta"] = s.beta;
    j["level"] = s.level;
    j["iota"] = s.iota;
    j["master_seed"] = s.master_seed;
    return j;
}

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

}  // namespace

std::string to_string(Model m) { return m == Model::Heston ? "heston" : "svv"; }

std::string to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::FourierDebiased: return "fourier";
        case EstimatorKind::FourierRaw: return "fourier_raw";
        case EstimatorKind::Asj: return "asj";
        case EstimatorKind::Vetter: return "vetter";
    }
    return "unknown";
}

Model parse_model(const std::string& s) {
    if (s == "heston") return Model::Heston;
    if (s == "svv") return Model::Svv;
    throw InputError("unknown model '" + s + "' (expected heston or svv)");
}

EstimatorKind parse_estimator(const std::string& s) {
    if (s == "fourier") return EstimatorKind::FourierDebiased;
    if (s == "fourier_raw") return EstimatorKind::FourierRaw;
    if (s == "asj") return EstimatorKind::Asj;
    if (s == "vetter") return EstimatorKind::Vetter;
    throw InputError("unknown estimator '" + s + "'");
}

void ExperimentSpec::validate() const {
    if (n_paths < 1) throw InputError("n_paths must be at least 1");
    if (estimators.empty()) throw InputError("no estimator selected");
    if (!(level > 0.0 && level < 1.0)) throw InputError("level must lie in (0, 1)");
    if (!(beta > 0.0)) throw InputError("beta must be positive");
    if (!(sampling.seconds > 0.0)) throw InputError("sampling interval must be positive");
    if (!(horizon > 0.0) || !(seconds_per_horizon > 0.0))
        throw InputError("horizon must be positive");
    if (fine_steps < 2) throw InputError("fine_steps must be at least 2");
    if (model == Model::Heston) heston.validate(); else svv.validate();
    if (tuning.adaptive) tuning.adaptive_cfg.validate();
    else if (tuning.M_override <= 0 && !(tuning.c_M > 0.0))
        throw InputError("c_M must be positive");
    if (sampling.kind == Sampling::Kind::Regular) stride_for(*this, sampling.seconds);
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

unsigned default_workers() {
    if (const char* env = std::getenv("FVV_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult res;
    res.spec = spec;
    res.version = library_version();
    res.paths.resize(spec.n_paths);
    const unsigned workers = spec.workers > 0 ? spec.workers : default_workers();
    parallel_for(spec.n_paths, workers, [&](std::size_t i) { res.paths[i] = run_path(spec, i); });

    for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
        res.summary.push_back(summarize(res.paths, e, spec.estimators[e]));
        if (spec.estimators[e] != EstimatorKind::FourierDebiased) continue;
        for (const auto& p : res.paths) {
            const EstimateRecord& r = p.estimates[e];
            if (r.ok && r.ci_available && r.std_error > 0.0)
                res.standardized_errors.push_back((r.value - p.truth) / r.std_error);
        }
    }
    return res;
}

std::vector<SensitivityRow> sensitivity_cM(const ExperimentSpec& spec,
                                           const std::vector<double>& cM_grid,
                                           const std::vector<double>& meshes) {
    spec.validate();
    if (cM_grid.empty() || meshes.empty()) throw InputError("empty c_M grid or mesh list");
    for (double c : cM_grid)
        if (!(c > 0.0)) throw InputError("c_M grid values must be positive");
    std::vector<std::size_t> strides;
    for (double m : meshes) strides.push_back(stride_for(spec, m));

    const std::size_t nc = cM_grid.size(), nm = meshes.size();
    // err[path][mesh][c], NaN marks a failed cell.
    std::vector<double> err(spec.n_paths * nm * nc, kNaN);
    std::vector<int> Ms(nm * nc, 0);
    const unsigned workers = spec.workers > 0 ? spec.workers : default_workers();
    parallel_for(spec.n_paths, workers, [&](std::size_t i) {
        const SimPath path = simulate(spec, derive_seed(spec.master_seed, i));
        for (std::size_t m = 0; m < nm; ++m) {
            const PriceSeries series = sample_regular(path, strides[m]);
            std::vector<int> M(nc);
            int M_max = 0;
            for (std::size_t c = 0; c < nc; ++c) {
                M[c] = select_M(series, cM_grid[c]);
                M_max = std::max(M_max, M[c]);
                Ms[m * nc + c] = M[c];
            }
            const int N = nyquist_N(series.n_increments());
            const CoeffArray dp = coeffs_dp(series, N + M_max);
            const CoeffArray vc = coeffs_v(dp, N, M_max);
            const double f = volvol_unit_factor(series.horizon());
            for (std::size_t c = 0; c < nc; ++c) {
                try {
                    const EstimatorConfig cfg = EstimatorConfig::for_series(series, M[c]);
                    err[(i * nm + m) * nc + c] =
                        f * volvol_debiased(vc, cfg).integrated_volvol - path.true_integrated_volvol;
                } catch (const std::exception&) {
                }
            }
        }
    });

    std::vector<SensitivityRow> rows;
    for (std::size_t m = 0; m < nm; ++m) {
        for (std::size_t c = 0; c < nc; ++c) {
            std::vector<double> e, sq;
            for (std::size_t i = 0; i < spec.n_paths; ++i) {
                const double d = err[(i * nm + m) * nc + c];
                if (!std::isfinite(d)) continue;
                e.push_back(d);
                sq.push_back(d * d);
            }
            SensitivityRow r;
            r.c_M = cM_grid[c];
            r.mesh_seconds = meshes[m];
            r.M = Ms[m * nc + c];
            r.n_ok = e.size();
            const MeanAndSe b = mean_and_se(e), q = mean_and_se(sq);
            r.bias = b.mean;
            r.bias_se = b.se;
            r.mse = q.mean;
            r.mse_se = q.se;
            rows.push_back(r);
        }
    }
    return rows;
}

QQData qq_data(const std::vector<double>& errors) {
    if (errors.size() < 100) throw InputError("Q-Q data needs at least 100 errors");
    QQData q;
    q.empirical = errors;
    std::sort(q.empirical.begin(), q.empirical.end());
    q.degenerate = q.empirical.front() == q.empirical.back();
    const boost::math::normal_distribution<double> z01;
    const double n = static_cast<double>(errors.size());
    q.theoretical.resize(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i)
        q.theoretical[i] = boost::math::quantile(z01, (static_cast<double>(i) + 0.5) / n);
    return q;
}

std::string library_version() { return FVV_VERSION_STRING; }

void write_results(const ExperimentResult& res, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const auto& spec = res.spec;
    {
        std::ofstream csv(std::filesystem::path(dir) / "paths.csv");
        if (!csv) throw std::runtime_error("cannot write into " + dir);
        csv << std::setprecision(9) << "path,seed,truth,n_obs";
        for (auto k : spec.estimators) {
            const std::string s = to_string(k);
            csv << ',' << s << "_estimate," << s << "_std_error," << s << "_ci_low," << s
                << "_ci_high," << s << "_M," << s << "_negative," << s << "_failure";
        }
        csv << '\n';
        for (const auto& p : res.paths) {
            csv << p.index << ',' << p.seed << ',' << p.truth << ',' << p.n_obs;
            for (const auto& r : p.estimates) {
                std::string why = r.failure;
                std::replace(why.begin(), why.end(), ',', ';');
                csv << ',' << r.value << ',' << r.std_error << ',' << r.ci_low << ','
                    << r.ci_high << ',' << (r.M > 0 ? r.M : r.kappa) << ',' << r.negative
                    << ',' << why;
            }
            csv << '\n';
        }
    }
    nlohmann::json j;
    j["version"] = res.version;
    j["config"] = spec_json(spec);
    j["summary"] = nlohmann::json::array();
    for (const auto& s : res.summary)
        j["summary"].push_back({{"estimator", to_string(s.kind)},
                                {"n_ok", s.n_ok},
                                {"n_failed", s.n_failed},
                                {"n_negative", s.n_negative},
                                {"bias", number(s.bias)},
                                {"bias_se", number(s.bias_se)},
                                {"mse", number(s.mse)},
                                {"mse_se", number(s.mse_se)},
                                {"n_ci", s.n_ci},
                                {"coverage", number(s.coverage)}});
    std::ofstream js(std::filesystem::path(dir) / "summary.json");
    js << std::setw(2) << j << '\n';
}

}  // namespace fvv
