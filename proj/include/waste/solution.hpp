#pragma once

#include "waste/core.hpp"

#include <string>
#include <vector>

namespace waste {

// Routes hold cluster node ids only. Depots are implicit; driver breaks are
// placed by route evaluation (latest position from which the vehicle still
// reaches the depot by the break's latest start) and show up in schedules.
struct Solution
{
    std::vector<std::vector<int>> routes;
};

// Orders routes deterministically: non-empty routes by first node id, empty
// routes last. Vehicles are interchangeable, so this never changes cost.
void canonicalize(Solution& solution);

struct PenaltyWeights
{
    double time_warp = 1.0;  // cost (metres) per second of lateness
    double load = 1.0;       // cost (metres) per unit of excess load
};

struct ScheduledStop
{
    int node = 0;
    Seconds arrival = 0;
    Seconds start = 0;  // start of service, waiting and lateness resolved
};

struct RouteEval
{
    std::int64_t distance = 0;  // metres
    Seconds wait = 0;
    Seconds time_warp = 0;
    double excess_load = 0;
    Seconds end_time = 0;  // arrival back at the destination depot
    bool break_fallback = false;
};

// Times a single route: departure from the origin depot at the shift start,
// waiting on early arrival, lateness relaxed into time warp (service then
// starts at the window's close). Mandatory breaks are inserted for any route
// still under way at a break's earliest start. When `schedule` is given it
// receives every stop including depots and breaks.
RouteEval evaluate_route(const RoutingInstance& instance, const std::vector<int>& route,
                         std::vector<ScheduledStop>* schedule = nullptr);

double route_cost(const RouteEval& eval, const PenaltyWeights& weights);

struct Evaluation
{
    std::int64_t distance = 0;        // metres
    double uncollected_prize = 0;     // metres
    Seconds wait = 0;
    Seconds time_warp = 0;
    double excess_load = 0;
    bool required_missing = false;
    bool feasible = false;
    double penalised_cost = 0;

    // True objective: distance plus uncollected prizes.
    double cost() const { return static_cast<double>(distance) + uncollected_prize; }
};

Evaluation evaluate(const RoutingInstance& instance, const Solution& solution,
                    const PenaltyWeights& weights);

// Full timing of every route, including depots and breaks.
std::vector<std::vector<ScheduledStop>> schedule_solution(const RoutingInstance& instance,
                                                          const Solution& solution);

// One line per route with start-of-service times, then an objective block.
std::string format_solution(const RoutingInstance& instance, const Solution& solution,
                            const PenaltyWeights& weights);

}  // namespace waste
