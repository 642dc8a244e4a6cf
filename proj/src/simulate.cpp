#include "fvv/simulate.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

namespace fvv {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double trapezoid(const std::vector<double>& f, double dt) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dt;
}

void check_grid(std::size_t n_steps, double horizon) {
    if (n_steps < 2) throw InputError("n_steps must be at least 2");
    if (!(horizon > 0.0)) throw InputError("horizon must be positive");
}

void check_corr(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw InputError("correlation must lie in [-1, 1]");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

void HestonParams::validate() const {
    if (!(theta > 0.0) || !(alpha > 0.0)) throw InputError("theta and alpha must be positive");
    if (gamma < 0.0) throw InputError("gamma must be non-negative");
    if (v0 < 0.0) throw InputError("v0 must be non-negative");
    check_corr(rho);
}

void SvvParams::validate() const {
    if (!(theta > 0.0) || !(alpha > 0.0)) throw InputError("theta and alpha must be positive");
    if (!(chi > 0.0) || !(eta_bar > 0.0)) throw InputError("chi and eta_bar must be positive");
    if (xi < 0.0) throw InputError("xi must be non-negative");
    if (v0 < 0.0 || g0 < 0.0) throw InputError("initial variances must be non-negative");
    check_corr(rho);
}

SimPath simulate_heston(const HestonParams& prm, std::size_t n_steps, double horizon,
                        std::uint64_t seed) {
    prm.validate();
    check_grid(n_steps, horizon);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z01;

    SimPath path;
    path.horizon = horizon;
    path.seed = seed;
    path.log_price.resize(n_steps + 1);
    path.v.resize(n_steps + 1);
    path.g2.resize(n_steps + 1);
    const double dt = horizon / static_cast<double>(n_steps);
    const double sdt = std::sqrt(dt);
    const double rc = std::sqrt(1.0 - prm.rho * prm.rho);
    const double g2 = prm.gamma * prm.gamma;

    double p = prm.p0, v = prm.v0;
    for (std::size_t i = 0;; ++i) {
        const double vp = std::max(v, 0.0);
        path.log_price[i] = p;
        path.v[i] = vp;
        path.g2[i] = g2 * vp;
        if (i == n_steps) break;
        const double z1 = z01(rng);
        const double z2 = z01(rng);
        const double sv = std::sqrt(vp) * sdt;
        p += (prm.mu - 0.5 * vp) * dt + sv * z1;
        v += prm.theta * (prm.alpha - vp) * dt + prm.gamma * sv * (prm.rho * z1 + rc * z2);
    }
    path.true_integrated_volvol = trapezoid(path.g2, dt);
    return path;
}

SimPath simulate_svv(const SvvParams& prm, std::size_t n_steps, double horizon,
                     std::uint64_t seed) {
    prm.validate();
    check_grid(n_steps, horizon);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z01;

    SimPath path;
    path.horizon = horizon;
    path.seed = seed;
    path.log_price.resize(n_steps + 1);
    path.v.resize(n_steps + 1);
    path.g2.resize(n_steps + 1);
    const double dt = horizon / static_cast<double>(n_steps);
    const double sdt = std::sqrt(dt);
    const double rc = std::sqrt(1.0 - prm.rho * prm.rho);

    double p = prm.p0, v = prm.v0, g = prm.g0;
    for (std::size_t i = 0;; ++i) {
        const double vp = std::max(v, 0.0);
        const double gp = std::max(g, 0.0);
        path.log_price[i] = p;
        path.v[i] = vp;
        path.g2[i] = gp;
        if (i == n_steps) break;
        const double z1 = z01(rng);
        const double z2 = z01(rng);
        const double z3 = z01(rng);
        const double sg = std::sqrt(gp) * sdt;
        p += (prm.mu - 0.5 * vp) * dt + std::sqrt(vp) * sdt * z1;
        v += prm.theta * (prm.alpha - vp) * dt + sg * (prm.rho * z1 + rc * z2);
        g += prm.chi * (prm.eta_bar - gp) * dt + prm.xi * sg * z3;
    }
    path.true_integrated_volvol = trapezoid(path.g2, dt);
    return path;
}

PriceSeries sample_regular(const SimPath& path, std::size_t stride) {
    const std::size_t n = path.n_steps();
    if (stride < 1 || n % stride != 0)
        throw InputError("stride must divide the number of simulation steps");
    const std::size_t m = n / stride;
    if (m < 1) throw InputError("sampled series would be empty");
    std::vector<double> t(m + 1), p(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        t[j] = kTwoPi * (static_cast<double>(j) / static_cast<double>(m));
        p[j] = path.log_price[j * stride];
    }
    return PriceSeries(std::move(t), std::move(p), path.horizon);
}

PriceSeries poisson_resample(const SimPath& path, double mean_duration, std::uint64_t seed,
                             double seconds_per_horizon) {
    const std::size_t n = path.n_steps();
    if (!(seconds_per_horizon > 0.0)) throw InputError("seconds_per_horizon must be positive");
    const double mesh = seconds_per_horizon / static_cast<double>(n);
    if (!(mean_duration > mesh))
        throw InputError("mean duration must exceed the simulation mesh");

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> dur(1.0 / mean_duration);
    std::vector<std::size_t> idx{0};
    double clock = 0.0;
    for (;;) {
        clock += dur(rng);
        if (clock > seconds_per_horizon) break;
        const auto j = static_cast<std::size_t>(std::floor(clock / mesh));
        if (j > idx.back()) idx.push_back(std::min(j, n));
    }
    if (idx.size() < 2) throw InputError("Poisson sampling produced fewer than 2 observations");
    std::vector<double> t(idx.size()), p(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        t[i] = kTwoPi * (static_cast<double>(idx[i]) / static_cast<double>(n));
        p[i] = path.log_price[idx[i]];
    }
    return PriceSeries(std::move(t), std::move(p), path.horizon);
}

void write_path_csv(const SimPath& path, const std::string& file, double seconds_per_horizon) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file);
    out << "time,log_price,v,g2\n" << std::setprecision(9);
    const double n = static_cast<double>(path.n_steps());
    for (std::size_t i = 0; i <= path.n_steps(); ++i)
        out << seconds_per_horizon * static_cast<double>(i) / n << ',' << path.log_price[i] << ','
            << path.v[i] << ',' << path.g2[i] << '\n';
}

}  // namespace fvv
