#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "waste/policies.hpp"

#include <algorithm>
#include <cmath>

using namespace waste;
using testutil::make_cluster;

namespace {

RateFunction flat_rate(double perHour)
{
    RateFunction rate;
    rate.per_hour.fill(perHour);
    return rate;
}

ClusterObservation obs_count(int n)
{
    ClusterObservation obs;
    obs.n = n;
    return obs;
}

ClusterObservation obs_measured(double volume)
{
    ClusterObservation obs;
    obs.has_measured_volume = true;
    obs.measured_volume = volume;
    return obs;
}

double bound_sigma(double mu) { return std::sqrt(mu * (100 - mu)); }

}  // namespace

TEST_CASE("overflow probability: anchors, degeneracy, monotonicity")
{
    // Mean exactly at capacity puts the tail at one half.
    CHECK(overflow_probability(100, 0, 30, 12, 3000) == doctest::Approx(0.5));
    // Nothing in the container, nothing arriving.
    CHECK(overflow_probability(0, 0, 30, 12, 100) == 0.0);
    // Zero variance collapses to an indicator on the mean.
    CHECK(overflow_probability(10, 0, 30, 0, 299) == 1.0);
    CHECK(overflow_probability(10, 0, 30, 0, 300) == 0.0);
    CHECK(overflow_probability(10, 0, 30, 0, 301) == 0.0);

    // With no recorded deposits the counter and sensor formulas coincide.
    for (double l : {0.5, 2.0, 11.0})
        CHECK(overflow_probability_sensor(0, l, 30, 12, 4000)
              == overflow_probability(0, l, 30, 12, 4000));

    // A full container with anything still arriving is past the median.
    CHECK(overflow_probability_sensor(4000, 3, 30, 12, 4000) > 0.5);

    double prev = -1;
    for (int n = 0; n <= 140; n += 10)
    {
        double p = overflow_probability(n, 5, 30, 12, 4000);
        CHECK(p >= prev);
        prev = p;
    }
    prev = 2;
    for (double V : {1000, 2000, 3000, 4000, 5000})
    {
        double p = overflow_probability(100, 5, 30, 12, V);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("overflow probability: agrees with direct simulation")
{
    const double n = 100, l = 20, mu = 30, sigma = 12;
    Rng rng(1234);
    const int draws = 100000;

    for (double V : {3600.0, 4000.0})
    {
        int over = 0;
        for (int i = 0; i < draws; ++i)
        {
            auto k = rng.poisson(l);
            double count = n + static_cast<double>(k);
            double total = rng.normal(count * mu, sigma * std::sqrt(count));
            over += total > V;
        }
        double mc = static_cast<double>(over) / draws;
        CHECK(std::abs(overflow_probability(n, l, mu, sigma, V) - mc) < 0.015);
    }
}

TEST_CASE("log likelihood: anchors and structure")
{
    const double V = 3000;

    // A single observation whose expected total sits exactly at capacity.
    std::vector<ServiceObservation> at{{100, true}};
    CHECK(log_likelihood(30, 20, at, V) == doctest::Approx(std::log(0.5)));
    at[0].overflowed = false;
    CHECK(log_likelihood(30, 20, at, V) == doctest::Approx(std::log(0.5)));

    // Empty and uninformative samples contribute nothing.
    CHECK(log_likelihood(30, 20, {}, V) == 0.0);
    CHECK(log_likelihood(30, 20, {{0, true}, {0, false}}, V) == 0.0);
    std::vector<ServiceObservation> mixed{{0, true}, {100, false}};
    std::vector<ServiceObservation> alone{{100, false}};
    CHECK(log_likelihood(28, 15, mixed, V) == log_likelihood(28, 15, alone, V));

    // Order of observations is irrelevant.
    std::vector<ServiceObservation> fwd{{90, false}, {110, true}, {130, true}, {70, false}};
    auto rev = fwd;
    std::reverse(rev.begin(), rev.end());
    CHECK(log_likelihood(29, 40, fwd, V) == doctest::Approx(log_likelihood(29, 40, rev, V)));

    // Matches an independent evaluation of the same model.
    double expected = 0;
    for (auto const& obs : fwd)
    {
        double z = (V - obs.d * 29.0) / std::sqrt(obs.d * 40.0 * 40.0);
        double p = std::clamp(0.5 * std::erfc(z / std::sqrt(2.0)), 1e-12, 1 - 1e-12);
        expected += obs.overflowed ? std::log(p) : std::log1p(-p);
    }
    CHECK(log_likelihood(29, 40, fwd, V) == doctest::Approx(expected).epsilon(1e-9));

    // Impossible outcomes are clamped, not infinite.
    std::vector<ServiceObservation> shocking{{50, false}};
    double clamped = log_likelihood(90, 10, shocking, 100);
    CHECK(std::isfinite(clamped));
    CHECK(clamped == doctest::Approx(std::log(1e-12)));
}

namespace {

// Services under a constant deposit volume: the container overflows exactly
// when volume * d exceeds capacity.
std::vector<ServiceObservation> constant_volume_sample(double volume, double V, int count,
                                                       std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<ServiceObservation> sample;
    for (int i = 0; i < count; ++i)
    {
        int d = static_cast<int>(rng.uniform_int(100, 170));
        sample.push_back({d, volume * d > V});
    }
    return sample;
}

}  // namespace

TEST_CASE("volume estimation: recovers a constant deposit volume")
{
    auto sample = constant_volume_sample(30, 4000, 200, 99);

    auto est = estimate_volume(sample, 4000);
    CHECK_FALSE(est.at_boundary);
    CHECK(est.mu > 25);
    CHECK(est.mu < 36);
    CHECK(est.sigma == doctest::Approx(bound_sigma(est.mu)));

    // Duplicating the sample rescales the likelihood but moves no optimum.
    auto doubled = sample;
    doubled.insert(doubled.end(), sample.begin(), sample.end());
    auto est2 = estimate_volume(doubled, 4000);
    CHECK(std::abs(est2.mu - est.mu) < 1e-3);

    // The free ascent never does worse than its conservative start and stays
    // inside the admissible box.
    auto free = estimate_volume(sample, 4000, EstimateMode::Unconstrained);
    CHECK(log_likelihood(free.mu, free.sigma, sample, 4000)
          >= log_likelihood(est.mu, est.sigma, sample, 4000) - 1e-9);
    CHECK(free.sigma <= bound_sigma(free.mu) + 1e-9);
    CHECK(free.mu >= 0.5);
    CHECK(free.mu <= 100);

    CHECK_THROWS_AS(estimate_volume({}, 4000), std::invalid_argument);
}

TEST_CASE("volume estimation: one-sided samples are flagged")
{
    std::vector<ServiceObservation> quiet(20, ServiceObservation{10, false});
    auto low = estimate_volume(quiet, 4000);
    CHECK(low.at_boundary);
    CHECK(low.mu == doctest::Approx(0.5));

    std::vector<ServiceObservation> flooded(20, ServiceObservation{150, true});
    auto high = estimate_volume(flooded, 4000);
    CHECK(high.at_boundary);
    CHECK(high.mu > 20);
}

TEST_CASE("per-cluster estimation pools thin histories by capacity")
{
    std::vector<Cluster> clusters{make_cluster(0, 1, 0, kSecondsPerDay),
                                  make_cluster(1, 2, 0, kSecondsPerDay),
                                  make_cluster(2, 3, 0, kSecondsPerDay),
                                  make_cluster(3, 4, 0, kSecondsPerDay)};
    clusters[0].capacity = 4000;
    clusters[1].capacity = 4000;
    clusters[2].capacity = 5000;
    clusters[3].capacity = 5000;

    std::vector<std::vector<ServiceObservation>> histories(4);
    for (int i = 0; i < 30; ++i)
        histories[0].push_back({i % 2 ? 140 : 120, i % 2 == 1});
    histories[1] = {{150, true}, {150, true}, {150, true}};
    histories[2] = {{100, false}, {100, false}};
    histories[3] = {{160, true}, {160, true}, {150, true}, {90, false}, {95, false}};

    auto estimates = estimate_cluster_volumes(histories, clusters);
    REQUIRE(estimates.size() == 4);

    // Rich history stands alone.
    auto direct0 = estimate_volume(histories[0], 4000);
    CHECK(estimates[0].mu == direct0.mu);
    CHECK(estimates[0].sigma == direct0.sigma);
    CHECK(estimates[0].at_boundary == direct0.at_boundary);

    // Thin history borrows every observation of its capacity class.
    auto pool4000 = histories[0];
    pool4000.insert(pool4000.end(), histories[1].begin(), histories[1].end());
    auto direct1 = estimate_volume(pool4000, 4000);
    CHECK(estimates[1].mu == direct1.mu);

    auto pool5000 = histories[2];
    pool5000.insert(pool5000.end(), histories[3].begin(), histories[3].end());
    auto direct23 = estimate_volume(pool5000, 5000);
    CHECK(estimates[2].mu == direct23.mu);
    CHECK(estimates[3].mu == direct23.mu);
    CHECK(estimates[2].at_boundary == direct23.at_boundary);

    // No usable observations anywhere: the prior, flagged.
    std::vector<Cluster> lone{make_cluster(0, 1, 0, kSecondsPerDay)};
    auto fallback = estimate_cluster_volumes({{{0, true}, {0, false}}}, lone);
    REQUIRE(fallback.size() == 1);
    CHECK(fallback[0].at_boundary);
    CHECK(fallback[0].mu == kPriorMu);
    CHECK(fallback[0].sigma == doctest::Approx(prior_sigma()));

    CHECK_THROWS_AS(estimate_cluster_volumes(histories, lone), std::invalid_argument);
}

TEST_CASE("rule-based policy: soonest-full clusters become required")
{
    // Capacity 1200 at 60 l per assumed deposit leaves room for 20 deposits.
    std::vector<Cluster> clusters{make_cluster(0, 1, 0, kSecondsPerDay),
                                  make_cluster(1, 2, 0, kSecondsPerDay),
                                  make_cluster(2, 3, 0, kSecondsPerDay),
                                  make_cluster(3, 4, 0, kSecondsPerDay)};
    for (auto& cluster : clusters)
        cluster.capacity = 1200;

    std::vector<RateFunction> rates(4, flat_rate(10.0 / 24));  // ten deposits a day
    rates[3] = flat_rate(0);

    std::vector<ClusterObservation> observations{obs_count(0), obs_count(10), obs_count(16),
                                                 obs_count(0)};

    auto top2 = baseline_prizes(observations, rates, clusters, 0, 2);
    REQUIRE(top2.size() == 4);
    CHECK_FALSE(top2[0].required);  // fills in 2 days
    CHECK(top2[1].required);        // 1 day
    CHECK(top2[2].required);        // under half a day
    CHECK_FALSE(top2[3].required);  // never fills
    for (auto const& prize : top2)
        CHECK(prize.value == 0);

    // The zero-rate cluster is always ranked last.
    auto top3 = baseline_prizes(observations, rates, clusters, 0, 3);
    CHECK(top3[0].required);
    CHECK_FALSE(top3[3].required);

    // Overfull counters rank at `now`, ahead of everything that still fits.
    auto overfull = observations;
    overfull[3] = obs_count(20);
    rates[3] = flat_rate(10.0 / 24);
    auto urgent = baseline_prizes(overfull, rates, clusters, 0, 1);
    CHECK(urgent[3].required);
    CHECK_FALSE(urgent[2].required);

    // Correction factor shrinks the usable capacity: 3 deposits of room fill
    // in 0.3 days, overtaking the 16-deposit cluster at 0.4 days.
    auto corrected = clusters;
    corrected[0].correction_factor = 0.15;
    auto adjusted = baseline_prizes(observations, rates, corrected, 0, 1);
    CHECK(adjusted[0].required);
    CHECK_FALSE(adjusted[2].required);

    // topN beyond the cluster count requires everything.
    auto all = baseline_prizes(observations, rates, clusters, 0, 99);
    for (auto const& prize : all)
        CHECK(prize.required);

    CHECK_THROWS_AS(baseline_prizes(observations, rates, clusters, 0, 0), std::invalid_argument);
    observations.pop_back();
    CHECK_THROWS_AS(baseline_prizes(observations, rates, clusters, 0, 2), std::invalid_argument);
}

TEST_CASE("rule-based policy: rate shape decides who fills first")
{
    std::vector<Cluster> clusters{make_cluster(0, 1, 0, kSecondsPerDay),
                                  make_cluster(1, 2, 0, kSecondsPerDay)};
    for (auto& cluster : clusters)
        cluster.capacity = 1200;

    RateFunction morning, evening;
    morning.per_hour.fill(0);
    evening.per_hour.fill(0);
    morning.per_hour[8] = 24;
    evening.per_hour[23] = 24;

    // Both have room for five more deposits; the morning cluster hits the
    // mark fifteen hours earlier.
    std::vector<ClusterObservation> observations{obs_count(15), obs_count(15)};
    auto prizes = baseline_prizes(observations, {morning, evening}, clusters,
                                  7 * kSecondsPerHour, 1);
    CHECK(prizes[0].required);
    CHECK_FALSE(prizes[1].required);
}

TEST_CASE("rule-based policy: sensor variant works from measured volume")
{
    std::vector<Cluster> clusters{make_cluster(0, 1, 0, kSecondsPerDay),
                                  make_cluster(1, 2, 0, kSecondsPerDay)};
    clusters[0].capacity = 1200;
    clusters[1].capacity = 1200;
    std::vector<RateFunction> rates(2, flat_rate(10.0 / 24));

    std::vector<ClusterObservation> observations{obs_measured(1200), obs_measured(0)};
    auto prizes = baseline_prizes_sensor(observations, rates, clusters, 0, 1);
    CHECK(prizes[0].required);
    CHECK_FALSE(prizes[1].required);

    std::vector<ClusterObservation> blind{obs_count(3), obs_count(0)};
    CHECK_THROWS_AS(baseline_prizes_sensor(blind, rates, clusters, 0, 1), std::invalid_argument);
}

TEST_CASE("probability policy: prizes scale with overflow probability")
{
    std::vector<Cluster> clusters{make_cluster(0, 1, 0, kSecondsPerDay)};
    clusters[0].capacity = 3000;
    std::vector<RateFunction> rates{flat_rate(0)};
    std::vector<VolumeEstimate> estimates{{30, 12, false}};

    // One hundred deposits of thirty litres on average: mean at capacity.
    std::vector<ClusterObservation> observations{obs_count(100)};

    auto prizes = isr_prizes(observations, rates, clusters, estimates, 0, kSecondsPerDay, 0, 100);
    REQUIRE(prizes.size() == 1);
    CHECK_FALSE(prizes[0].required);
    CHECK(prizes[0].value == doctest::Approx(100 * 0.5 * 1000));

    // Epsilon at or below the probability flips the cluster to required.
    auto flipped = isr_prizes(observations, rates, clusters, estimates, 0, kSecondsPerDay, 0.5, 100);
    CHECK(flipped[0].required);
    CHECK(flipped[0].value == 0);

    auto notYet = isr_prizes(observations, rates, clusters, estimates, 0, kSecondsPerDay, 0.4, 100);
    CHECK_FALSE(notYet[0].required);

    // Epsilon of one requires everything, even an empty cluster.
    std::vector<ClusterObservation> empty{obs_count(0)};
    auto everything = isr_prizes(empty, rates, clusters, estimates, 0, kSecondsPerDay, 1, 100);
    CHECK(everything[0].required);

    // A flagged estimate behaves exactly like the prior.
    std::vector<VolumeEstimate> flagged{{55, 5, true}};
    auto viaPrior = isr_prizes(observations, rates, clusters, flagged, 0, kSecondsPerDay, 0.4, 100);
    CHECK_FALSE(viaPrior[0].required);
    CHECK(viaPrior[0].value == doctest::Approx(50000));

    CHECK_THROWS_AS(isr_prizes(observations, rates, clusters, estimates, 0, kSecondsPerDay, -0.1, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(isr_prizes(observations, rates, clusters, estimates, 0, kSecondsPerDay, 1.1, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(isr_prizes(observations, rates, clusters, estimates, 0, kSecondsPerDay, 0.1, 0),
                    std::invalid_argument);
    std::vector<VolumeEstimate> misaligned;
    CHECK_THROWS_AS(isr_prizes(observations, rates, clusters, misaligned, 0, kSecondsPerDay, 0.1, 100),
                    std::invalid_argument);
}

TEST_CASE("probability policy: future arrivals and sensor variant")
{
    std::vector<Cluster> clusters{make_cluster(0, 1, 0, kSecondsPerDay)};
    clusters[0].capacity = 720;
    std::vector<RateFunction> rates{flat_rate(1)};  // 24 arrivals per day
    std::vector<VolumeEstimate> estimates{{30, 0, false}};
    std::vector<ClusterObservation> observations{obs_count(0)};

    // Expected future volume 24 * 30 = 720 lands exactly on capacity.
    auto prizes = isr_prizes(observations, rates, clusters, estimates, 0, kSecondsPerDay, 0, 2);
    CHECK(prizes[0].value == doctest::Approx(2 * 0.5 * 1000));

    // Probabilities and prizes stay within their ranges on a parameter sweep.
    for (double capacity : {500.0, 720.0, 1500.0, 4000.0})
    {
        clusters[0].capacity = capacity;
        for (int n : {0, 5, 20})
        {
            std::vector<ClusterObservation> sweep{obs_count(n)};
            auto p = isr_prizes(sweep, rates, clusters, estimates, 0, kSecondsPerDay, 0, 7);
            if (!p[0].required)
            {
                CHECK(p[0].value >= 0);
                CHECK(p[0].value <= 7 * 1000);
            }
        }
    }

    // Sensor variant: with no future arrivals the outcome is an indicator.
    clusters[0].capacity = 720;
    std::vector<RateFunction> still{flat_rate(0)};
    auto atCap = isr_prizes_sensor({obs_measured(720)}, still, clusters, estimates, 0,
                                   kSecondsPerDay, 0, 5);
    CHECK_FALSE(atCap[0].required);
    CHECK(atCap[0].value == 0);

    auto spilling = isr_prizes_sensor({obs_measured(721)}, still, clusters, estimates, 0,
                                      kSecondsPerDay, 0, 5);
    CHECK(spilling[0].required);

    CHECK_THROWS_AS(isr_prizes_sensor({obs_count(3)}, still, clusters, estimates, 0,
                                      kSecondsPerDay, 0, 5),
                    std::invalid_argument);
}
