#pragma once

#include "waste/city.hpp"
#include "waste/hgs.hpp"
#include "waste/policies.hpp"

#include <memory>
#include <string>
#include <vector>

namespace waste {

struct PolicyConfig
{
    enum class Kind
    {
        Baseline,  // top-N soonest-full required; break-unaware
        Isr,       // probability prizes; break-aware
    };

    Kind kind = Kind::Isr;
    int top_n = 25;       // baseline
    double epsilon = 0;   // isr
    double rho_km = 1024; // isr
    bool sensor = false;
    EstimateMode estimate_mode = EstimateMode::Unconstrained;
};

struct SimConfig
{
    int horizon_days = 120;
    int warmup_days = 30;  // run by the incumbent (default baseline) dispatcher
    std::uint64_t seed = 1;
    SolveParams solver;          // per-day seeds are derived from `seed`
    double prize_floor_m = 1;    // optional clusters below this stay out of the day's instance
    bool record_deposit_events = false;  // deposit rows in the event log (large)
};

// Daily planning happens five minutes before the shift starts.
inline constexpr Seconds kPlanOffset = 6 * kSecondsPerHour + 55 * kSecondsPerMinute;

enum class EventKind
{
    Deposit,
    PlanShift,
    Service,
    Break,
};

struct EventRow
{
    Seconds time = 0;
    EventKind kind = EventKind::Deposit;
    int cluster = -1;       // deposits and services
    int vehicle = -1;       // services and breaks
    double fill_pct = 0;    // services only
    double overflow_l = 0;  // services only
};

struct RouteRecord
{
    int day = 0;
    int vehicle = 0;
    std::int64_t distance_m = 0;
    Seconds duration_s = 0;  // shift start to return at the depot, breaks included
    int clusters = 0;
    bool window_violation = false;
};

struct EventLog
{
    int horizon_days = 0;
    int num_clusters = 0;
    std::vector<EventRow> events;
    std::vector<RouteRecord> routes;
};

struct MeasureReport
{
    double avg_daily_distance_km = 0;
    double avg_route_duration_h = 0;
    double avg_routes_per_day = 0;
    double avg_clusters_per_day = 0;
    double service_level_pct = 100;  // services finding fill at most 100%
    double avg_fill_level_pct = 0;
    double avg_overflow_volume_l = 0;  // mean excess litres among overflowing services
    int unserviced_count = 0;
};

struct VolumeTotals
{
    double deposited_l = 0;
    double collected_l = 0;  // litres within capacity
    double overflow_l = 0;   // litres above capacity, removed at service
    double remaining_l = 0;  // still in clusters at the end of the run
};

struct SimResult
{
    MeasureReport measures;
    EventLog log;
    VolumeTotals totals;
    int solver_failures = 0;     // days whose best solution was infeasible
    int window_violations = 0;   // executed routes with time-window or shift overruns
};

// Ground-truth state of one cluster during simulation. Policies never see
// hidden_volume; they receive ClusterObservation snapshots instead.
struct ClusterState
{
    double hidden_volume = 0;
    int n = 0;
    Seconds last_service = 0;
    std::vector<ServiceObservation> history;
};

struct ServiceOutcome
{
    double fill_pct = 0;
    double overflow_l = 0;
    double collected_l = 0;
};

// Empties a cluster: records the fill percentage and overflow, appends the
// (deposits, overflowed) observation, and resets the counters.
ServiceOutcome handle_service(ClusterState& state, double capacity, Seconds time);

// All deposit arrivals for the whole horizon, fixed by the seed alone so
// every policy faces the identical stream. One decorrelated substream per
// cluster; times and volumes are drawn independently.
struct DepositStream
{
    std::vector<Seconds> times;
    std::vector<double> volumes;
};

std::vector<DepositStream> generate_deposits(const City& city, int horizonDays,
                                             std::uint64_t seed);
std::vector<DepositStream> generate_deposits_serial(const City& city, int horizonDays,
                                                    std::uint64_t seed);

// Timing of a break-unaware solution against the break-carrying instance:
// breaks go to the latest position that still reaches the depot by their
// latest start. Returns the full schedule per route.
std::vector<std::vector<ScheduledStop>> insert_breaks(const RoutingInstance& withBreaks,
                                                      const Solution& solution);

// Table-style performance measures over the post-warm-up window.
MeasureReport compute_measures(const EventLog& log, int warmupDays);

SimResult run_simulation(const City& city, std::shared_ptr<const TravelMatrix> matrix,
                         const PolicyConfig& policy, const SimConfig& config);

// CSV: time,kind,cluster,vehicle,fill_pct,overflow_l
void save_event_log(const EventLog& log, const std::string& path);

}  // namespace waste
