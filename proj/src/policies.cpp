#include "waste/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace waste {

namespace {

constexpr double kProbFloor = 1e-12;

double normal_tail(double mean, double variance, double threshold)
{
    if (variance <= 0)
        return mean > threshold ? 1.0 : 0.0;
    double z = (threshold - mean) / std::sqrt(variance);
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double clamp_prob(double p)
{
    return std::clamp(p, kProbFloor, 1.0 - kProbFloor);
}

// Conservative variance bound: deposit volumes live in (0, 100] litres, so
// sigma^2 <= mu(100 - mu).
double sigma_bound(double mu)
{
    return std::sqrt(std::max(0.0, mu * (100.0 - mu)));
}

bool outcomes_vary(const std::vector<ServiceObservation>& sample)
{
    bool sawOverflow = false;
    bool sawRegular = false;
    for (auto const& obs : sample)
    {
        if (obs.d < 1)
            continue;
        (obs.overflowed ? sawOverflow : sawRegular) = true;
    }
    return sawOverflow && sawRegular;
}

// Golden-section maximisation of f on [lo, hi] to the given x tolerance.
template <typename F> double golden_max(F&& f, double lo, double hi, double tol)
{
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol)
    {
        if (f1 < f2)
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
        else
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    return (a + b) / 2;
}

// Largest time at which the expected arrivals since `now` still fit within
// `remaining` deposits, capped. Returned as a fractional second count for
// stable ranking.
double time_till_full(const RateFunction& rate, Seconds now, double remaining)
{
    if (remaining <= 0)
        return static_cast<double>(now);

    Seconds cap = now + kFillHorizonCap;
    double cum = 0;
    Seconds t = now;
    while (t < cap)
    {
        Seconds hourStart = t - t % kSecondsPerHour;
        Seconds sliceEnd = std::min(hourStart + kSecondsPerHour, cap);
        int hour = static_cast<int>(hourStart / kSecondsPerHour % 24);
        double lambda = rate.per_hour[hour];
        double inc = lambda * static_cast<double>(sliceEnd - t) / kSecondsPerHour;
        if (cum + inc > remaining)
            return static_cast<double>(t)
                   + (remaining - cum) / lambda * static_cast<double>(kSecondsPerHour);
        cum += inc;
        t = sliceEnd;
    }
    return static_cast<double>(cap);
}

std::vector<Prize> rank_soonest(const std::vector<double>& fillTime,
                                const std::vector<Cluster>& clusters, int topN)
{
    std::vector<int> order(clusters.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (fillTime[a] != fillTime[b])
            return fillTime[a] < fillTime[b];
        return clusters[a].id < clusters[b].id;
    });

    std::vector<Prize> prizes(clusters.size());
    auto required = std::min<std::size_t>(topN, clusters.size());
    for (std::size_t rank = 0; rank < required; ++rank)
        prizes[order[rank]].required = true;
    return prizes;
}

std::vector<Prize> baseline_impl(const std::vector<ClusterObservation>& observations,
                                 const std::vector<RateFunction>& rates,
                                 const std::vector<Cluster>& clusters, Seconds now, int topN,
                                 bool sensor)
{
    if (topN < 1)
        throw std::invalid_argument("topN must be at least 1");
    if (observations.size() != clusters.size() || rates.size() != clusters.size())
        throw std::invalid_argument("observations, rates, and clusters must align");

    std::vector<double> fillTime(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c)
    {
        double remaining;
        if (sensor)
        {
            if (!observations[c].has_measured_volume)
                throw std::invalid_argument("sensor policy needs measured volumes");
            remaining = clusters[c].correction_factor
                        * (clusters[c].capacity - observations[c].measured_volume)
                        / kAssumedDepositVolume;
        }
        else
        {
            remaining = clusters[c].correction_factor
                        * (clusters[c].capacity / kAssumedDepositVolume - observations[c].n);
        }
        fillTime[c] = time_till_full(rates[c], now, remaining);
    }
    return rank_soonest(fillTime, clusters, topN);
}

std::vector<Prize> isr_impl(const std::vector<ClusterObservation>& observations,
                            const std::vector<RateFunction>& rates,
                            const std::vector<Cluster>& clusters,
                            const std::vector<VolumeEstimate>& estimates, Seconds now,
                            Seconds nextPlanTime, double epsilon, double rhoKm, bool sensor)
{
    if (epsilon < 0 || epsilon > 1)
        throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (rhoKm <= 0)
        throw std::invalid_argument("rho must be positive");
    if (observations.size() != clusters.size() || rates.size() != clusters.size()
        || estimates.size() != clusters.size())
        throw std::invalid_argument("observations, rates, clusters, and estimates must align");

    std::vector<Prize> prizes(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c)
    {
        double mu = estimates[c].mu;
        double sigma = estimates[c].sigma;
        if (estimates[c].at_boundary)
        {
            mu = kPriorMu;
            sigma = prior_sigma();
        }

        double l = expected_arrivals(rates[c], now, nextPlanTime);
        double p;
        if (sensor)
        {
            if (!observations[c].has_measured_volume)
                throw std::invalid_argument("sensor policy needs measured volumes");
            p = overflow_probability_sensor(observations[c].measured_volume, l, mu, sigma,
                                            clusters[c].capacity);
        }
        else
        {
            p = overflow_probability(observations[c].n, l, mu, sigma, clusters[c].capacity);
        }

        if (p >= 1 - epsilon)
            prizes[c].required = true;
        else
            prizes[c].value = rhoKm * p * 1000;  // kilometres to metres
    }
    return prizes;
}

}  // namespace

double overflow_probability(double n, double l, double mu, double sigma, double V)
{
    double variance = (n + l) * sigma * sigma + l * mu * mu;
    return normal_tail((n + l) * mu, variance, V);
}

double overflow_probability_sensor(double U, double l, double mu, double sigma, double V)
{
    double variance = l * sigma * sigma + l * mu * mu;
    return normal_tail(U + l * mu, variance, V);
}

double log_likelihood(double mu, double sigma, const std::vector<ServiceObservation>& sample,
                      double V)
{
    double total = 0;
    for (auto const& obs : sample)
    {
        if (obs.d < 1)
            continue;
        double d = obs.d;
        double p = clamp_prob(normal_tail(d * mu, d * sigma * sigma, V));
        total += obs.overflowed ? std::log(p) : std::log1p(-p);
    }
    return total;
}

VolumeEstimate estimate_volume(const std::vector<ServiceObservation>& sample, double V,
                               EstimateMode mode)
{
    if (sample.empty())
        throw std::invalid_argument("estimate_volume needs at least one observation");

    constexpr double kFloor = 0.5;
    constexpr double kStep = 0.5;
    constexpr double kTol = 1e-4;

    auto conservative = [&](double mu) { return log_likelihood(mu, sigma_bound(mu), sample, V); };

    // Walk down from 100 until the profile drops, then refine the bracket.
    // The first drop encloses the largest local maximiser.
    double prev = 100;
    double prevValue = conservative(prev);
    double mu = prev;
    bool bracketed = false;
    for (double next = prev - kStep; next >= kFloor - 1e-9; next -= kStep)
    {
        double value = conservative(next);
        if (value < prevValue)
        {
            double hi = std::min(prev + kStep, 100.0);
            mu = golden_max(conservative, next, hi, kTol);
            bracketed = true;
            break;
        }
        prev = next;
        prevValue = value;
    }
    if (!bracketed)
        mu = kFloor;  // profile still rising at the floor

    VolumeEstimate estimate;
    estimate.mu = mu;
    estimate.sigma = sigma_bound(mu);
    estimate.at_boundary = !outcomes_vary(sample) || !bracketed || mu >= 100 - kTol;
    if (mode == EstimateMode::Conservative || estimate.at_boundary)
        return estimate;

    // Two-variable ascent from the conservative solution, projected onto the
    // admissible box 0 < mu <= 100, 0 < sigma <= sigma_bound(mu).
    auto project = [&](double& m, double& s) {
        m = std::clamp(m, kFloor, 100.0);
        s = std::clamp(s, 1e-3, std::max(1e-3, sigma_bound(m)));
    };
    double m = estimate.mu;
    double s = estimate.sigma;
    project(m, s);
    double value = log_likelihood(m, s, sample, V);
    for (int iter = 0; iter < 100; ++iter)
    {
        constexpr double kH = 1e-5;
        double gm = (log_likelihood(m + kH, s, sample, V) - log_likelihood(m - kH, s, sample, V))
                    / (2 * kH);
        double gs = (log_likelihood(m, s + kH, sample, V) - log_likelihood(m, s - kH, sample, V))
                    / (2 * kH);
        double norm = std::hypot(gm, gs);
        if (norm < 1e-10)
            break;

        double step = 1.0;
        bool moved = false;
        while (step > 1e-8)
        {
            double mNext = m + step * gm / norm;
            double sNext = s + step * gs / norm;
            project(mNext, sNext);
            double nextValue = log_likelihood(mNext, sNext, sample, V);
            if (nextValue > value + 1e-12)
            {
                m = mNext;
                s = sNext;
                value = nextValue;
                moved = true;
                break;
            }
            step /= 2;
        }
        if (!moved)
            break;
    }
    estimate.mu = m;
    estimate.sigma = s;
    return estimate;
}

std::vector<VolumeEstimate> estimate_cluster_volumes(
    const std::vector<std::vector<ServiceObservation>>& histories,
    const std::vector<Cluster>& clusters, EstimateMode mode, int minObservations)
{
    if (histories.size() != clusters.size())
        throw std::invalid_argument("histories and clusters must align");

    auto usable = [](const std::vector<ServiceObservation>& sample) {
        return std::count_if(sample.begin(), sample.end(),
                             [](auto const& obs) { return obs.d >= 1; });
    };

    std::vector<char> thin(clusters.size(), 0);
    for (std::size_t c = 0; c < clusters.size(); ++c)
        thin[c] = usable(histories[c]) < minObservations;

    // Clusters with thin histories share a pooled estimate over all clusters
    // of equal capacity; pools are built only where needed.
    std::map<double, VolumeEstimate> pooledEstimate;
    for (std::size_t c = 0; c < clusters.size(); ++c)
    {
        if (!thin[c] || pooledEstimate.count(clusters[c].capacity))
            continue;
        std::vector<ServiceObservation> pool;
        for (std::size_t j = 0; j < clusters.size(); ++j)
            if (clusters[j].capacity == clusters[c].capacity)
                pool.insert(pool.end(), histories[j].begin(), histories[j].end());
        if (usable(pool) >= 1)
            pooledEstimate[clusters[c].capacity] = estimate_volume(pool, clusters[c].capacity, mode);
        else
            pooledEstimate[clusters[c].capacity] = VolumeEstimate{kPriorMu, prior_sigma(), true};
    }

    std::vector<VolumeEstimate> estimates(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c)
    {
        if (thin[c])
            estimates[c] = pooledEstimate[clusters[c].capacity];
        else
            estimates[c] = estimate_volume(histories[c], clusters[c].capacity, mode);
    }
    return estimates;
}

std::vector<Prize> baseline_prizes(const std::vector<ClusterObservation>& observations,
                                   const std::vector<RateFunction>& rates,
                                   const std::vector<Cluster>& clusters, Seconds now, int topN)
{
    return baseline_impl(observations, rates, clusters, now, topN, false);
}

std::vector<Prize> baseline_prizes_sensor(const std::vector<ClusterObservation>& observations,
                                          const std::vector<RateFunction>& rates,
                                          const std::vector<Cluster>& clusters, Seconds now,
                                          int topN)
{
    return baseline_impl(observations, rates, clusters, now, topN, true);
}

std::vector<Prize> isr_prizes(const std::vector<ClusterObservation>& observations,
                              const std::vector<RateFunction>& rates,
                              const std::vector<Cluster>& clusters,
                              const std::vector<VolumeEstimate>& estimates, Seconds now,
                              Seconds nextPlanTime, double epsilon, double rhoKm)
{
    return isr_impl(observations, rates, clusters, estimates, now, nextPlanTime, epsilon, rhoKm,
                    false);
}

std::vector<Prize> isr_prizes_sensor(const std::vector<ClusterObservation>& observations,
                                     const std::vector<RateFunction>& rates,
                                     const std::vector<Cluster>& clusters,
                                     const std::vector<VolumeEstimate>& estimates, Seconds now,
                                     Seconds nextPlanTime, double epsilon, double rhoKm)
{
    return isr_impl(observations, rates, clusters, estimates, now, nextPlanTime, epsilon, rhoKm,
                    true);
}

}  // namespace waste
