#include "fvv/io.hpp"

#include "fvv/fourier_core.hpp"
#include "fvv/volvol.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace fvv {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

bool parse_double(const std::string& s, double& v) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && p == e;
}

int column_index(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

std::string utc_date(double epoch_seconds) {
    const auto days = std::chrono::sys_days{std::chrono::days{
        static_cast<long>(std::floor(epoch_seconds / 86400.0))}};
    const std::chrono::year_month_day ymd{days};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

}  // namespace

double parse_timestamp(const std::string& s, std::string* date) {
    double v;
    if (parse_double(s, v)) {
        if (date) *date = utc_date(v);
        return v;
    }
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0;
    double sec = 0.0;
    char sep = 0;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%d-%u-%u%c%u:%u:%lf%n", &y, &mo, &d, &sep, &h, &mi, &sec,
                    &consumed) != 7 ||
        (sep != 'T' && sep != ' ') || static_cast<std::size_t>(consumed) != s.size())
        throw InputError("bad timestamp '" + s + "'");
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                          std::chrono::day{d}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec < 0.0 || sec >= 61.0)
        throw InputError("invalid timestamp '" + s + "'");
    if (date) *date = s.substr(0, 10);
    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec;
}

std::vector<TradingDay> read_ticks_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open " + file);
    std::string line;
    if (!std::getline(in, line)) throw InputError(file + " is empty");
    const auto header = split_csv_line(line);
    const int it = column_index(header, "timestamp");
    const int ip = column_index(header, "price");
    const int id = column_index(header, "date");
    if (it < 0 || ip < 0) throw InputError(file + ": header needs timestamp and price columns");

    std::map<std::string, TradingDay> days;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        const auto need = static_cast<std::size_t>(std::max({it, ip, id})) + 1;
        if (cells.size() < need)
            throw InputError(file + ":" + std::to_string(lineno) + ": missing columns");
        std::string date;
        double t;
        try {
            t = parse_timestamp(cells[static_cast<std::size_t>(it)], &date);
        } catch (const InputError& e) {
            throw InputError(file + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (id >= 0) date = cells[static_cast<std::size_t>(id)];
        double price;
        if (!parse_double(cells[static_cast<std::size_t>(ip)], price))
            throw InputError(file + ":" + std::to_string(lineno) + ": bad price");
        auto& day = days[date];
        day.date = date;
        day.seconds.push_back(t);
        day.prices.push_back(price);
    }
    std::vector<TradingDay> out;
    for (auto& [_, d] : days) out.push_back(std::move(d));
    return out;
}

PriceSeries previous_tick(const PriceSeries& series, std::size_t n_points) {
    if (n_points < 1) throw InputError("grid needs at least one increment");
    const auto& t = series.times();
    const auto& p = series.log_prices();
    const double t0 = t.front(), span = t.back() - t0;
    std::vector<double> gt(n_points + 1), gp(n_points + 1);
    std::size_t j = 0;
    for (std::size_t i = 0; i <= n_points; ++i) {
        const double g = t0 + span * (static_cast<double>(i) / static_cast<double>(n_points));
        while (j + 1 < t.size() && t[j + 1] <= g) ++j;
        gt[i] = kTwoPi * (static_cast<double>(i) / static_cast<double>(n_points));
        gp[i] = p[j];
    }
    gp.back() = p.back();
    return PriceSeries(std::move(gt), std::move(gp), series.horizon());
}

DayEstimate estimate_day(const TradingDay& day, const DayEstimateOptions& opt) {
    if (day.seconds.size() < opt.min_obs)
        throw InputError("day " + day.date + " has " + std::to_string(day.seconds.size()) +
                         " observations, fewer than " + std::to_string(opt.min_obs));
    const PriceSeries s = rescale_to_2pi(day.seconds, day.prices, opt.horizon);
    DayEstimate r;
    r.date = day.date;
    r.n_obs = s.size();
    if (opt.adaptive) {
        const AdaptiveResult a = adaptive_cM(s, opt.adaptive_cfg);
        r.c_M = a.c_M;
        r.M = a.M;
    } else {
        r.c_M = opt.c_M;
        r.M = select_M(s, opt.c_M);
    }
    const EstimatorConfig cfg = EstimatorConfig::for_series(s, r.M);
    r.N = cfg.N;
    const int kv = required_v_range(cfg);
    const CoeffArray dp = coeffs_dp(s, cfg.N + kv);
    const CoeffArray vc = coeffs_v(dp, cfg.N, kv);
    const VolvolEstimate e = estimate_with_ci(vc, cfg, true, opt.level);
    const double f = volvol_unit_factor(s.horizon());
    r.integrated_volvol = f * e.integrated_volvol;
    r.negative = e.negative;
    r.ci_available = e.variance_available;
    // NaN propagates when no interval is available
    r.std_error = f * kTwoPi * e.std_error;
    r.ci_low = f * e.ci_low;
    r.ci_high = f * e.ci_high;
    r.integrated_variance = kTwoPi * vc[0].real();
    r.daily_return = s.log_prices().back() - s.log_prices().front();
    return r;
}

void write_day_estimates_csv(const std::vector<DayEstimate>& rows, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file);
    out << std::setprecision(9)
        << "date,n_obs,N,M,c_M,integrated_volvol,std_error,ci_low,ci_high,negative_flag,"
           "integrated_variance,daily_return\n";
    for (const auto& r : rows)
        out << r.date << ',' << r.n_obs << ',' << r.N << ',' << r.M << ',' << r.c_M << ','
            << r.integrated_volvol << ',' << r.std_error << ',' << r.ci_low << ',' << r.ci_high
            << ',' << (r.negative ? 1 : 0) << ',' << r.integrated_variance << ','
            << r.daily_return << '\n';
}

DatedColumn read_dated_column(const std::string& file, const std::string& column) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open " + file);
    std::string line;
    if (!std::getline(in, line)) throw InputError(file + " is empty");
    const auto header = split_csv_line(line);
    const int id = column_index(header, "date");
    const int iv = column_index(header, column);
    if (id < 0 || iv < 0) throw InputError(file + ": needs date and " + column + " columns");
    DatedColumn out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() <= static_cast<std::size_t>(std::max(id, iv)))
            throw InputError(file + ":" + std::to_string(lineno) + ": missing columns");
        double v;
        if (!parse_double(cells[static_cast<std::size_t>(iv)], v))
            throw InputError(file + ":" + std::to_string(lineno) + ": bad value");
        out.dates.push_back(cells[static_cast<std::size_t>(id)]);
        out.values.push_back(v);
    }
    return out;
}

}  // namespace fvv
