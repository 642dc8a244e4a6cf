#pragma once

#include "fvv/simulate.hpp"
#include "fvv/tuning.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fvv {

enum class Model { Heston, Svv };
enum class EstimatorKind { FourierDebiased, FourierRaw, Asj, Vetter };

std::string to_string(Model m);
std::string to_string(EstimatorKind k);
Model parse_model(const std::string& s);
EstimatorKind parse_estimator(const std::string& s);

struct Sampling {
    enum class Kind { Regular, Poisson };
    Kind kind = Kind::Regular;
    double seconds = 1.0;  // mesh for Regular, mean duration for Poisson
};

struct Tuning {
    double c_M = 0.05;
    int M_override = 0;  // > 0 fixes M directly
    bool adaptive = false;
    AdaptiveConfig adaptive_cfg;
};

struct ExperimentSpec {
    Model model = Model::Heston;
    HestonParams heston;
    SvvParams svv;
    std::size_t n_paths = 1000;
    std::size_t fine_steps = 23400;
    double horizon = kTradingDay;
    double seconds_per_horizon = 23400.0;
    Sampling sampling;
    std::vector<EstimatorKind> estimators{EstimatorKind::FourierDebiased};
    Tuning tuning;
    double beta = 0.04;
    double level = 0.95;
    double iota = 0.3;
    std::uint64_t master_seed = 42;
    unsigned workers = 0;  // 0: FVV_THREADS, then hardware concurrency

    void validate() const;
};

/// One estimator on one path, calendar units.
struct EstimateRecord {
    double value = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double ci_low = std::numeric_limits<double>::quiet_NaN();
    double ci_high = std::numeric_limits<double>::quiet_NaN();
    int M = 0;
    int kappa = 0;
    double c_M = 0.0;
    bool ok = false;
    bool negative = false;
    bool ci_available = false;
    std::string failure;
};

struct PathRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double truth = 0.0;
    std::size_t n_obs = 0;
    std::vector<EstimateRecord> estimates;  // parallel to spec.estimators
};

struct EstimatorSummary {
    EstimatorKind kind{};
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
    std::size_t n_negative = 0;
    double bias = 0.0;
    double bias_se = 0.0;  // Monte Carlo standard error of the bias
    double mse = 0.0;
    double mse_se = 0.0;
    std::size_t n_ci = 0;
    double coverage = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<PathRecord> paths;
    std::vector<EstimatorSummary> summary;
    /// (estimate - truth) / SE for the debiased Fourier estimator, path order.
    std::vector<double> standardized_errors;
    std::string version;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

struct SensitivityRow {
    double c_M = 0.0;
    double mesh_seconds = 0.0;
    int M = 0;
    std::size_t n_ok = 0;
    double bias = 0.0;
    double bias_se = 0.0;
    double mse = 0.0;
    double mse_se = 0.0;
};

/// MSE of the debiased estimator over a c_M grid and a set of regular
/// meshes, using the same simulated paths for every cell.
std::vector<SensitivityRow> sensitivity_cM(const ExperimentSpec& spec,
                                           const std::vector<double>& cM_grid,
                                           const std::vector<double>& meshes);

struct QQData {
    std::vector<double> theoretical;
    std::vector<double> empirical;
    bool degenerate = false;
};

/// Normal quantiles at (i - 0.5)/n against the sorted sample.
QQData qq_data(const std::vector<double>& errors);

/// Sum in a fixed pairwise tree so results do not depend on thread count.
double pairwise_sum(const double* x, std::size_t n);

/// FVV_THREADS if set, else hardware concurrency.
unsigned default_workers();

/// Runs body(i) for i in [0, n) on `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

/// Per-path CSV and JSON summary under `dir`.
void write_results(const ExperimentResult& res, const std::string& dir);

std::string library_version();

}  // namespace fvv
