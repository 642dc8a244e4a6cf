#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvv {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

/// One trading day as a year fraction.
inline constexpr double kTradingDay = 1.0 / 252.0;

/// Log-price observations on the rescaled clock [0, 2*pi].
///
/// `horizon` is the calendar length of the window in years and is only
/// used to convert clock-scale quantities back to annualized units.
class PriceSeries {
public:
    PriceSeries() = default;
    PriceSeries(std::vector<double> times, std::vector<double> log_prices,
                double horizon = kTradingDay);

    std::size_t size() const { return times_.size(); }
    std::size_t n_increments() const { return times_.empty() ? 0 : times_.size() - 1; }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& log_prices() const { return log_prices_; }
    double horizon() const { return horizon_; }

    /// Largest gap between consecutive observations (clock scale).
    double max_mesh() const;
    /// Average gap, 2*pi/n on a full regular grid.
    double mean_mesh() const;
    /// True when every gap matches the first within `rel_tol`.
    bool is_regular(double rel_tol = 1e-9) const;

    std::vector<double> increments() const;

private:
    std::vector<double> times_;
    std::vector<double> log_prices_;
    double horizon_ = kTradingDay;
};

/// Map raw timestamps and positive prices onto [0, 2*pi] and log-prices.
PriceSeries rescale_to_2pi(std::span<const double> raw_times,
                           std::span<const double> raw_prices,
                           double horizon = kTradingDay);

/// Fourier coefficients indexed by k in [-k_max, k_max].
class CoeffArray {
public:
    CoeffArray() = default;
    explicit CoeffArray(int k_max);
    CoeffArray(int k_max, std::vector<std::complex<double>> values);

    int k_max() const { return k_max_; }
    std::size_t size() const { return values_.size(); }

    std::complex<double>& operator[](int k) { return values_[static_cast<std::size_t>(k + k_max_)]; }
    const std::complex<double>& operator[](int k) const {
        return values_[static_cast<std::size_t>(k + k_max_)];
    }
    /// Bounds-checked access.
    const std::complex<double>& at(int k) const;

    /// Contiguous storage, element 0 is k = -k_max.
    std::span<const std::complex<double>> data() const { return values_; }
    std::span<std::complex<double>> data() { return values_; }

    /// Exact check that c(-k) == conj(c(k)) for every k.
    bool is_hermitian() const;

private:
    int k_max_ = -1;
    std::vector<std::complex<double>> values_;
};

/// Raised when a series or coefficient array violates a precondition.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an estimator result fails a numerical sanity check.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fvv
