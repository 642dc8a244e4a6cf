#include "fvv/types.hpp"

#include <cmath>
#include <string>

namespace fvv {

PriceSeries::PriceSeries(std::vector<double> times, std::vector<double> log_prices,
                         double horizon)
    : times_(std::move(times)), log_prices_(std::move(log_prices)), horizon_(horizon) {
    if (times_.size() != log_prices_.size())
        throw InputError("times and log_prices differ in length (" +
                         std::to_string(times_.size()) + " vs " +
                         std::to_string(log_prices_.size()) + ")");
    if (times_.size() < 2) throw InputError("a price series needs at least 2 observations");
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
        throw InputError("horizon must be positive and finite");
    if (times_.front() < 0.0 || times_.back() > kTwoPi * (1.0 + 1e-12))
        throw InputError("times must lie in [0, 2*pi]");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i]) || !std::isfinite(log_prices_[i]))
            throw InputError("non-finite observation at index " + std::to_string(i));
        if (i > 0 && !(times_[i] > times_[i - 1]))
            throw InputError("times not strictly increasing at index " + std::to_string(i));
    }
}

double PriceSeries::max_mesh() const {
    double m = 0.0;
    for (std::size_t i = 1; i < times_.size(); ++i) m = std::max(m, times_[i] - times_[i - 1]);
    return m;
}

double PriceSeries::mean_mesh() const {
    return (times_.back() - times_.front()) / static_cast<double>(n_increments());
}

bool PriceSeries::is_regular(double rel_tol) const {
    const double h = times_[1] - times_[0];
    for (std::size_t i = 2; i < times_.size(); ++i)
        if (std::abs((times_[i] - times_[i - 1]) - h) > rel_tol * h) return false;
    return true;
}

std::vector<double> PriceSeries::increments() const {
    std::vector<double> r(n_increments());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = log_prices_[i + 1] - log_prices_[i];
    return r;
}

PriceSeries rescale_to_2pi(std::span<const double> raw_times, std::span<const double> raw_prices,
                           double horizon) {
    if (raw_times.size() != raw_prices.size())
        throw InputError("timestamps and prices differ in length");
    if (raw_times.size() < 2) throw InputError("need at least 2 observations, got " +
                                               std::to_string(raw_times.size()));
    for (std::size_t i = 0; i < raw_prices.size(); ++i) {
        if (!(raw_prices[i] > 0.0) || !std::isfinite(raw_prices[i]))
            throw InputError("non-positive price at index " + std::to_string(i));
        if (i > 0 && !(raw_times[i] > raw_times[i - 1]))
            throw InputError("timestamps not strictly increasing at index " + std::to_string(i));
    }
    const double t0 = raw_times.front();
    const double span = raw_times.back() - t0;
    std::vector<double> t(raw_times.size()), p(raw_times.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = kTwoPi * ((raw_times[i] - t0) / span);
        p[i] = std::log(raw_prices[i]);
    }
    t.back() = kTwoPi;
    return PriceSeries(std::move(t), std::move(p), horizon);
}

CoeffArray::CoeffArray(int k_max) : k_max_(k_max) {
    if (k_max < 0) throw InputError("k_max must be non-negative");
    values_.assign(static_cast<std::size_t>(2 * k_max + 1), {0.0, 0.0});
}

CoeffArray::CoeffArray(int k_max, std::vector<std::complex<double>> values)
    : k_max_(k_max), values_(std::move(values)) {
    if (k_max < 0) throw InputError("k_max must be non-negative");
    if (values_.size() != static_cast<std::size_t>(2 * k_max + 1))
        throw InputError("coefficient storage must hold 2*k_max+1 values");
}

const std::complex<double>& CoeffArray::at(int k) const {
    if (k < -k_max_ || k > k_max_)
        throw InputError("coefficient index " + std::to_string(k) + " outside [-" +
                         std::to_string(k_max_) + ", " + std::to_string(k_max_) + "]");
    return (*this)[k];
}

bool CoeffArray::is_hermitian() const {
    for (int k = 0; k <= k_max_; ++k)
        if ((*this)[-k] != std::conj((*this)[k])) return false;
    return true;
}

}  // namespace fvv
