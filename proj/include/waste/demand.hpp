#pragma once

#include "waste/clock.hpp"
#include "waste/rng.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace waste {

// Deposit arrivals follow a non-homogeneous Poisson process whose rate is
// piecewise constant per hour of day and repeats daily.
struct RateFunction
{
    std::array<double, 24> per_hour{};  // expected arrivals per hour

    double daily_total() const;
};

// Exact integral of the rate over [from, to), in expected arrivals. Times are
// seconds since midnight of day 0; the rate cycles every 24 hours.
double expected_arrivals(const RateFunction& rate, Seconds from, Seconds to);

// Samples arrival times in [from, to), sorted ascending. Each hourly piece
// draws a Poisson count and uniform positions within the piece.
std::vector<Seconds> sample_arrivals(const RateFunction& rate, Seconds from, Seconds to, Rng& rng);

struct Deposit
{
    Seconds time = 0;
    int cluster = 0;
};

// Observed deposit history. The span marks the observation window; when a log
// is loaded from file the span defaults to the whole days covering the data.
struct DepositLog
{
    std::vector<Deposit> entries;
    Seconds span_begin = 0;
    Seconds span_end = 0;
};

// CSV with header "timestamp,cluster_id"; timestamps are integer seconds.
DepositLog load_deposit_log(const std::string& path);
void save_deposit_log(const DepositLog& log, const std::string& path);

// Per-cluster hourly rate estimates: arrivals in hour h divided by the number
// of times hour h was observed within the log's span.
std::map<int, RateFunction> estimate_rates(const DepositLog& log);

// Volume of a single deposit, in litres. Supports the default triangular
// model and a degenerate constant model for controlled experiments.
struct VolumeModel
{
    enum class Family
    {
        Triangular,
        Constant,
    };

    Family family = Family::Triangular;
    double lo = 10;
    double mode = 30;
    double hi = 60;

    static VolumeModel triangular(double lo, double mode, double hi);
    static VolumeModel constant(double value);

    double sample(Rng& rng) const;
    double mean() const;
    double variance() const;
    void validate() const;  // throws unless the support lies within (0, 100]
};

}  // namespace waste
