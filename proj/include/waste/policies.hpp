#pragma once

#include "waste/core.hpp"
#include "waste/demand.hpp"

#include <cmath>
#include <vector>

namespace waste {

// What a policy is allowed to see about a cluster: the deposit counter and
// service history, never the true fill volume. Sensor scenarios additionally
// expose a measured volume.
struct ClusterObservation
{
    int n = 0;  // deposits since the last service
    Seconds last_service = 0;
    bool has_measured_volume = false;
    double measured_volume = 0;  // litres; sensor scenarios only
};

// One completed service seen from the estimation side: how many deposits had
// accumulated and whether the cluster had overflowed.
struct ServiceObservation
{
    int d = 0;
    bool overflowed = false;
};

struct VolumeEstimate
{
    double mu = 30;
    double sigma = 0;
    bool at_boundary = false;  // degenerate sample; callers fall back to the prior
};

// Prior used when a cluster's sample cannot identify the deposit volume
// (no observations, or all outcomes identical).
inline constexpr double kPriorMu = 30;
inline double prior_sigma() { return std::sqrt(kPriorMu * (100 - kPriorMu)); }

// Volume assumed per deposit by the rule-based policy, litres.
inline constexpr double kAssumedDepositVolume = 60;

// Horizon cap for the time-till-full inversion; zero-rate clusters never fill
// and rank last at the cap.
inline constexpr Seconds kFillHorizonCap = 28 * kSecondsPerDay;

// Probability that a cluster with n recorded deposits plus l expected future
// arrivals exceeds capacity V, under deposit volumes Norm(mu, sigma^2). The
// future arrivals enter as a compound Poisson term approximated by a normal.
// A zero-variance total falls back to the point mass indicator.
double overflow_probability(double n, double l, double mu, double sigma, double V);

// Sensor variant: the accumulated volume U is measured, only the l future
// arrivals are uncertain.
double overflow_probability_sensor(double U, double l, double mu, double sigma, double V);

// Joint log likelihood of service observations under deposit volume
// Norm(mu, sigma^2): each observation contributes the log probability of its
// overflow outcome given d deposits against capacity V. Probabilities are
// clamped to [1e-12, 1-1e-12]; observations with d < 1 carry no information
// and are skipped.
double log_likelihood(double mu, double sigma, const std::vector<ServiceObservation>& sample,
                      double V);

enum class EstimateMode
{
    Conservative,   // maximise over sigma = sqrt(mu(100-mu)), descending from mu = 100
    Unconstrained,  // two-variable ascent started from the conservative solution
};

// Maximum-likelihood deposit volume from overflow outcomes. Samples whose
// outcomes never vary pin the optimum to a boundary and come back flagged.
VolumeEstimate estimate_volume(const std::vector<ServiceObservation>& sample, double V,
                               EstimateMode mode = EstimateMode::Conservative);

// Per-cluster estimates; clusters with fewer than minObservations usable
// observations share a pooled estimate over all clusters of equal capacity.
std::vector<VolumeEstimate> estimate_cluster_volumes(
    const std::vector<std::vector<ServiceObservation>>& histories,
    const std::vector<Cluster>& clusters, EstimateMode mode = EstimateMode::Conservative,
    int minObservations = 10);

// Rule-based policy: rank clusters by the expected moment they fill up
// (inverting the cumulative arrival rate against remaining capacity measured
// in deposits) and require the topN soonest. All other prizes are zero.
std::vector<Prize> baseline_prizes(const std::vector<ClusterObservation>& observations,
                                   const std::vector<RateFunction>& rates,
                                   const std::vector<Cluster>& clusters, Seconds now, int topN);

// Sensor variant: remaining capacity is V - U instead of deposit counting.
std::vector<Prize> baseline_prizes_sensor(const std::vector<ClusterObservation>& observations,
                                          const std::vector<RateFunction>& rates,
                                          const std::vector<Cluster>& clusters, Seconds now,
                                          int topN);

// Probability-driven policy: a cluster whose overflow probability by the next
// planning moment reaches 1 - epsilon becomes required; every other cluster
// gets prize rhoKm * P, converted to metres.
std::vector<Prize> isr_prizes(const std::vector<ClusterObservation>& observations,
                              const std::vector<RateFunction>& rates,
                              const std::vector<Cluster>& clusters,
                              const std::vector<VolumeEstimate>& estimates, Seconds now,
                              Seconds nextPlanTime, double epsilon, double rhoKm);

std::vector<Prize> isr_prizes_sensor(const std::vector<ClusterObservation>& observations,
                                     const std::vector<RateFunction>& rates,
                                     const std::vector<Cluster>& clusters,
                                     const std::vector<VolumeEstimate>& estimates, Seconds now,
                                     Seconds nextPlanTime, double epsilon, double rhoKm);

}  // namespace waste
