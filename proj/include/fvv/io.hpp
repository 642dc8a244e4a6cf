#pragma once

#include "fvv/tuning.hpp"
#include "fvv/types.hpp"

#include <string>
#include <vector>

namespace fvv {

/// Ticks of one trading day, timestamps in seconds.
struct TradingDay {
    std::string date;
    std::vector<double> seconds;
    std::vector<double> prices;
};

/// Reads `timestamp,price[,date]`. Timestamps are epoch seconds or
/// ISO-8601 (YYYY-MM-DD[T ]HH:MM:SS[.fff]); the day comes from the date
/// column when present, else from the timestamp.
std::vector<TradingDay> read_ticks_csv(const std::string& file);

/// Seconds since 1970-01-01 for an ISO-8601 timestamp, and its date part.
double parse_timestamp(const std::string& s, std::string* date = nullptr);

/// Last observation at or before each point of a regular grid with
/// `n_points` increments over the span of `series`.
PriceSeries previous_tick(const PriceSeries& series, std::size_t n_points);

struct DayEstimateOptions {
    double c_M = 0.05;
    bool adaptive = false;
    AdaptiveConfig adaptive_cfg;
    double level = 0.95;
    double horizon = kTradingDay;
    std::size_t min_obs = 20;
};

struct DayEstimate {
    std::string date;
    std::size_t n_obs = 0;
    int N = 0;
    int M = 0;
    double c_M = 0.0;
    double integrated_volvol = 0.0;  // calendar units
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool negative = false;
    bool ci_available = false;
    double integrated_variance = 0.0;
    double daily_return = 0.0;  // close minus open log-price
};

DayEstimate estimate_day(const TradingDay& day, const DayEstimateOptions& opt);

void write_day_estimates_csv(const std::vector<DayEstimate>& rows, const std::string& file);

/// (date, value) pairs; `column` picks the value column by header name.
struct DatedColumn {
    std::vector<std::string> dates;
    std::vector<double> values;
};
DatedColumn read_dated_column(const std::string& file, const std::string& column);

}  // namespace fvv
