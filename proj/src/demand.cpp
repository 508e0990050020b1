#include "waste/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace waste {

double RateFunction::daily_total() const
{
    return std::accumulate(per_hour.begin(), per_hour.end(), 0.0);
}

namespace {

// Calls fn(hourOfDay, sliceBegin, sliceEnd) for every maximal constant-rate
// slice of [from, to).
template <typename Fn> void for_each_slice(Seconds from, Seconds to, Fn&& fn)
{
    Seconds t = from;
    while (t < to)
    {
        Seconds sliceEnd = (t / kSecondsPerHour + 1) * kSecondsPerHour;
        sliceEnd = std::min(sliceEnd, to);
        auto hour = static_cast<int>(t / kSecondsPerHour % 24);
        fn(hour, t, sliceEnd);
        t = sliceEnd;
    }
}

}  // namespace

double expected_arrivals(const RateFunction& rate, Seconds from, Seconds to)
{
    if (from > to)
        throw std::invalid_argument("expected_arrivals: from > to");
    if (from < 0)
        throw std::invalid_argument("expected_arrivals: negative time");

    double total = 0;
    Seconds fullDays = (to - from) / kSecondsPerDay;
    total += static_cast<double>(fullDays) * rate.daily_total();

    for_each_slice(from + fullDays * kSecondsPerDay, to, [&](int hour, Seconds a, Seconds b) {
        total += rate.per_hour[hour] * static_cast<double>(b - a) / kSecondsPerHour;
    });
    return total;
}

std::vector<Seconds> sample_arrivals(const RateFunction& rate, Seconds from, Seconds to, Rng& rng)
{
    if (from > to)
        throw std::invalid_argument("sample_arrivals: from > to");

    std::vector<Seconds> times;
    for_each_slice(from, to, [&](int hour, Seconds a, Seconds b) {
        double mean = rate.per_hour[hour] * static_cast<double>(b - a) / kSecondsPerHour;
        if (mean < 0)
            throw std::invalid_argument("sample_arrivals: negative rate");
        if (mean == 0)
            return;

        auto count = rng.poisson(mean);
        std::size_t first = times.size();
        for (std::int64_t i = 0; i < count; ++i)
            times.push_back(a + rng.uniform_int(0, b - a - 1));
        std::sort(times.begin() + first, times.end());
    });
    return times;
}

DepositLog load_deposit_log(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open deposit log '" + path + "'");

    DepositLog log;
    std::string line;
    bool first = true;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        if (first)
        {
            first = false;
            if (line.rfind("timestamp", 0) == 0)
                continue;
        }

        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("deposit log '" + path + "': expected 'timestamp,cluster_id'");
        log.entries.push_back({std::stoll(line.substr(0, comma)),
                               std::stoi(line.substr(comma + 1))});
    }

    if (!log.entries.empty())
    {
        auto [lo, hi] = std::minmax_element(log.entries.begin(), log.entries.end(),
                                            [](auto const& a, auto const& b) { return a.time < b.time; });
        log.span_begin = lo->time / kSecondsPerDay * kSecondsPerDay;
        log.span_end = (hi->time / kSecondsPerDay + 1) * kSecondsPerDay;
    }
    return log;
}

void save_deposit_log(const DepositLog& log, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write deposit log '" + path + "'");

    out << "timestamp,cluster_id\n";
    for (auto const& entry : log.entries)
        out << entry.time << "," << entry.cluster << "\n";
}

std::map<int, RateFunction> estimate_rates(const DepositLog& log)
{
    if (log.span_end - log.span_begin < kSecondsPerDay)
        throw std::invalid_argument("estimate_rates: log must span at least one full day");

    std::array<double, 24> observedHours{};  // exposure per hour of day, in hours
    for_each_slice(log.span_begin, log.span_end, [&](int hour, Seconds a, Seconds b) {
        observedHours[hour] += static_cast<double>(b - a) / kSecondsPerHour;
    });

    std::map<int, RateFunction> rates;
    for (auto const& entry : log.entries)
    {
        if (entry.time < log.span_begin || entry.time >= log.span_end)
            throw std::invalid_argument("estimate_rates: deposit outside the log span");
        auto hour = static_cast<int>(entry.time / kSecondsPerHour % 24);
        rates[entry.cluster].per_hour[hour] += 1.0;
    }

    for (auto& [cluster, rate] : rates)
        for (int h = 0; h < 24; ++h)
            if (rate.per_hour[h] > 0)
                rate.per_hour[h] /= observedHours[h];
    return rates;
}

VolumeModel VolumeModel::triangular(double lo, double mode, double hi)
{
    VolumeModel model{Family::Triangular, lo, mode, hi};
    model.validate();
    return model;
}

VolumeModel VolumeModel::constant(double value)
{
    VolumeModel model{Family::Constant, value, value, value};
    model.validate();
    return model;
}

double VolumeModel::sample(Rng& rng) const
{
    if (family == Family::Constant)
        return lo;
    return rng.triangular(lo, mode, hi);
}

double VolumeModel::mean() const
{
    if (family == Family::Constant)
        return lo;
    return (lo + mode + hi) / 3.0;
}

double VolumeModel::variance() const
{
    if (family == Family::Constant)
        return 0;
    return (lo * lo + mode * mode + hi * hi - lo * mode - lo * hi - mode * hi) / 18.0;
}

void VolumeModel::validate() const
{
    if (!(lo <= mode && mode <= hi))
        throw std::invalid_argument("volume model: need lo <= mode <= hi");
    if (lo <= 0 || hi > 100)
        throw std::invalid_argument("volume model: support must lie within (0, 100] litres");
}

}  // namespace waste
