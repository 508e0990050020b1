#include "waste/simulator.hpp"

#include "waste/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace waste {

namespace {

constexpr std::uint64_t kDepositTimeStream = 0x9e3779b902743261ull;
constexpr std::uint64_t kDepositVolumeStream = 0xc2b2ae3d27d4eb4full;
constexpr std::uint64_t kSolverStream = 0x165667b19e3779f9ull;

DepositStream cluster_stream(const City& city, int cluster, int horizonDays, std::uint64_t seed)
{
    DepositStream stream;
    Seconds end = Seconds{horizonDays} * kSecondsPerDay;

    Rng timeRng(mix_seed(seed, kDepositTimeStream, cluster));
    stream.times = sample_arrivals(city.rates[cluster], 0, end, timeRng);

    Rng volumeRng(mix_seed(seed, kDepositVolumeStream, cluster));
    stream.volumes.reserve(stream.times.size());
    for (std::size_t i = 0; i < stream.times.size(); ++i)
        stream.volumes.push_back(city.volume.sample(volumeRng));
    return stream;
}

int kind_rank(EventKind kind)
{
    switch (kind)
    {
    case EventKind::Deposit: return 0;
    case EventKind::PlanShift: return 1;
    case EventKind::Service: return 2;
    case EventKind::Break: return 3;
    }
    return 4;
}

const char* kind_name(EventKind kind)
{
    switch (kind)
    {
    case EventKind::Deposit: return "deposit";
    case EventKind::PlanShift: return "plan_shift";
    case EventKind::Service: return "service";
    case EventKind::Break: return "break";
    }
    return "?";
}

struct PendingEvent
{
    Seconds time = 0;
    EventKind kind = EventKind::Deposit;
    int cluster = -1;  // deposits: city cluster index; services: same
    int vehicle = -1;

    bool operator<(const PendingEvent& other) const
    {
        if (time != other.time)
            return time < other.time;
        int a = kind_rank(kind);
        int b = kind_rank(other.kind);
        if (a != b)
            return a < b;
        if (cluster != other.cluster)
            return cluster < other.cluster;
        return vehicle < other.vehicle;
    }
};

}  // namespace

ServiceOutcome handle_service(ClusterState& state, double capacity, Seconds time)
{
    ServiceOutcome outcome;
    outcome.fill_pct = state.hidden_volume / capacity * 100;
    outcome.overflow_l = std::max(0.0, state.hidden_volume - capacity);
    outcome.collected_l = std::min(state.hidden_volume, capacity);

    state.history.push_back({state.n, state.hidden_volume > capacity});
    state.hidden_volume = 0;
    state.n = 0;
    state.last_service = time;
    return outcome;
}

std::vector<DepositStream> generate_deposits(const City& city, int horizonDays,
                                             std::uint64_t seed)
{
    std::vector<DepositStream> streams(city.clusters.size());
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < static_cast<int>(city.clusters.size()); ++c)
        streams[c] = cluster_stream(city, c, horizonDays, seed);
    return streams;
}

std::vector<DepositStream> generate_deposits_serial(const City& city, int horizonDays,
                                                    std::uint64_t seed)
{
    std::vector<DepositStream> streams(city.clusters.size());
    for (int c = 0; c < static_cast<int>(city.clusters.size()); ++c)
        streams[c] = cluster_stream(city, c, horizonDays, seed);
    return streams;
}

std::vector<std::vector<ScheduledStop>> insert_breaks(const RoutingInstance& withBreaks,
                                                      const Solution& solution)
{
    return schedule_solution(withBreaks, solution);
}

MeasureReport compute_measures(const EventLog& log, int warmupDays)
{
    if (warmupDays >= log.horizon_days)
        throw std::invalid_argument("warm-up must end before the horizon");

    Seconds windowStart = Seconds{warmupDays} * kSecondsPerDay;
    int days = log.horizon_days - warmupDays;

    MeasureReport report;
    std::int64_t distance = 0;
    Seconds duration = 0;
    std::int64_t clustersServed = 0;
    int routes = 0;
    for (auto const& route : log.routes)
    {
        if (route.day < warmupDays)
            continue;
        ++routes;
        distance += route.distance_m;
        duration += route.duration_s;
        clustersServed += route.clusters;
    }
    report.avg_daily_distance_km = static_cast<double>(distance) / 1000 / days;
    report.avg_route_duration_h =
        routes ? static_cast<double>(duration) / kSecondsPerHour / routes : 0;
    report.avg_routes_per_day = static_cast<double>(routes) / days;
    report.avg_clusters_per_day = static_cast<double>(clustersServed) / days;

    int services = 0;
    int withinCapacity = 0;
    int overflows = 0;
    double fillSum = 0;
    double overflowSum = 0;
    std::vector<char> serviced(log.num_clusters, 0);
    for (auto const& event : log.events)
    {
        if (event.kind != EventKind::Service || event.time < windowStart)
            continue;
        ++services;
        fillSum += event.fill_pct;
        if (event.overflow_l > 0)
        {
            ++overflows;
            overflowSum += event.overflow_l;
        }
        else
        {
            ++withinCapacity;
        }
        if (event.cluster >= 0 && event.cluster < log.num_clusters)
            serviced[event.cluster] = 1;
    }
    report.service_level_pct = services ? 100.0 * withinCapacity / services : 100.0;
    report.avg_fill_level_pct = services ? fillSum / services : 0;
    report.avg_overflow_volume_l = overflows ? overflowSum / overflows : 0;
    report.unserviced_count =
        log.num_clusters - static_cast<int>(std::count(serviced.begin(), serviced.end(), 1));
    return report;
}

SimResult run_simulation(const City& city, std::shared_ptr<const TravelMatrix> matrix,
                         const PolicyConfig& policy, const SimConfig& config)
{
    if (config.warmup_days >= config.horizon_days)
        throw std::invalid_argument("warm-up must end before the horizon");

    auto numClusters = city.clusters.size();
    auto streams = generate_deposits(city, config.horizon_days, config.seed);

    SimResult result;
    result.log.horizon_days = config.horizon_days;
    result.log.num_clusters = static_cast<int>(numClusters);

    std::vector<ClusterState> states(numClusters);
    std::vector<std::size_t> cursor(numClusters, 0);

    auto apply_deposit = [&](int c) {
        double volume = streams[c].volumes[cursor[c]];
        states[c].hidden_volume += volume;
        states[c].n += 1;
        result.totals.deposited_l += volume;
        if (config.record_deposit_events)
            result.log.events.push_back({streams[c].times[cursor[c]], EventKind::Deposit, c, -1});
        ++cursor[c];
    };

    // Shift used by break-unaware solves: no break nodes, horizon shortened by
    // the breaks' total duration so inserted breaks rarely push the return
    // past the shift end.
    ShiftConfig breakFree = city.shift;
    breakFree.breaks.clear();
    Seconds breakTime = 0;
    for (auto const& spec : city.shift.breaks)
        breakTime += spec.duration;

    // The first half of the warm-up runs under the incumbent dispatcher: a
    // fixed weekly schedule that services every cluster on its calendar slot
    // regardless of fill, the way municipal rounds run before any estimation
    // is in place. Clusters that fill faster than the cadence overflow on it,
    // so the service histories handed to the measured policy contain both
    // outcomes at deposit counts bracketing each cluster's capacity. The
    // second half of the warm-up lets the measured policy reach its own
    // steady state before measurement starts.
    constexpr int kIncumbentCadence = 7;
    int handoverDay = config.warmup_days / 2;

    for (int day = 0; day < config.horizon_days; ++day)
    {
        bool scheduleEra = day < handoverDay;
        Seconds dayStart = Seconds{day} * kSecondsPerDay;
        Seconds dayEnd = dayStart + kSecondsPerDay;
        Seconds planTime = dayStart + kPlanOffset;

        // Deposits up to and including the planning moment come first.
        for (std::size_t c = 0; c < numClusters; ++c)
            while (cursor[c] < streams[c].times.size() && streams[c].times[cursor[c]] <= planTime)
                apply_deposit(static_cast<int>(c));

        result.log.events.push_back({planTime, EventKind::PlanShift, -1, -1});

        std::vector<ClusterObservation> observations(numClusters);
        for (std::size_t c = 0; c < numClusters; ++c)
        {
            observations[c].n = states[c].n;
            observations[c].last_service = states[c].last_service;
            if (policy.sensor)
            {
                observations[c].has_measured_volume = true;
                observations[c].measured_volume = states[c].hidden_volume;
            }
        }

        std::vector<Prize> prizes;
        if (scheduleEra)
        {
            prizes.resize(numClusters);
            for (std::size_t c = 0; c < numClusters; ++c)
                prizes[c].required =
                    static_cast<int>(c) % kIncumbentCadence == day % kIncumbentCadence;
        }
        else if (policy.kind == PolicyConfig::Kind::Baseline)
        {
            prizes = policy.sensor
                         ? baseline_prizes_sensor(observations, city.rates, city.clusters,
                                                  planTime, policy.top_n)
                         : baseline_prizes(observations, city.rates, city.clusters, planTime,
                                           policy.top_n);
        }
        else
        {
            std::vector<std::vector<ServiceObservation>> histories(numClusters);
            for (std::size_t c = 0; c < numClusters; ++c)
                histories[c] = states[c].history;
            auto estimates = estimate_cluster_volumes(histories, city.clusters,
                                                      policy.estimate_mode);
            prizes = policy.sensor
                         ? isr_prizes_sensor(observations, city.rates, city.clusters, estimates,
                                             planTime, planTime + kSecondsPerDay, policy.epsilon,
                                             policy.rho_km)
                         : isr_prizes(observations, city.rates, city.clusters, estimates,
                                      planTime, planTime + kSecondsPerDay, policy.epsilon,
                                      policy.rho_km);
        }

        std::vector<int> chosen;
        for (std::size_t c = 0; c < numClusters; ++c)
            if (prizes[c].required || prizes[c].value >= config.prize_floor_m)
                chosen.push_back(static_cast<int>(c));

        std::vector<PendingEvent> dayEvents;
        if (!chosen.empty())
        {
            std::vector<Cluster> subClusters;
            std::vector<Prize> subPrizes;
            subClusters.reserve(chosen.size());
            for (int c : chosen)
            {
                subClusters.push_back(city.clusters[c]);
                subPrizes.push_back(prizes[c]);
            }

            bool breakAware = !scheduleEra && policy.kind == PolicyConfig::Kind::Isr;
            auto solveInst = breakAware
                                 ? build_routing_instance(subClusters, subPrizes, city.shift,
                                                          matrix)
                                 : build_routing_instance(subClusters, subPrizes, breakFree,
                                                          matrix);
            if (!breakAware)
                solveInst.horizon -= breakTime;

            SolveParams params = config.solver;
            params.seed = mix_seed(config.seed, kSolverStream, day);
            auto report = solve_hgs(solveInst, params);
            if (!report.found_feasible)
                ++result.solver_failures;

            // Break-unaware plans get their breaks inserted before execution.
            RoutingInstance execInst;
            Solution executed = report.best;
            const RoutingInstance* exec = &solveInst;
            if (!breakAware)
            {
                execInst = build_routing_instance(subClusters, subPrizes, city.shift, matrix);
                for (auto& route : executed.routes)
                    for (int& node : route)
                        node += execInst.num_breaks();
                exec = &execInst;
            }

            auto schedules = schedule_solution(*exec, executed);
            for (std::size_t r = 0; r < executed.routes.size(); ++r)
            {
                if (executed.routes[r].empty())
                    continue;
                auto eval = evaluate_route(*exec, executed.routes[r]);
                result.log.routes.push_back({day, static_cast<int>(r), eval.distance,
                                             eval.end_time,
                                             static_cast<int>(executed.routes[r].size()),
                                             eval.time_warp > 0});
                if (eval.time_warp > 0)
                    ++result.window_violations;

                for (auto const& stop : schedules[r])
                {
                    auto const& node = exec->nodes[stop.node];
                    Seconds when = dayStart + city.shift.start + stop.start;
                    if (node.kind == NodeKind::Cluster)
                        dayEvents.push_back({when, EventKind::Service,
                                             chosen[node.cluster_slot], static_cast<int>(r)});
                    else if (node.kind == NodeKind::Break)
                        dayEvents.push_back({when, EventKind::Break, -1, static_cast<int>(r)});
                }
            }
        }

        std::sort(dayEvents.begin(), dayEvents.end());

        // Interleave the rest of the day's deposits with the planned services.
        for (auto const& event : dayEvents)
        {
            // Deposits tie-break ahead of services and breaks.
            for (std::size_t c = 0; c < numClusters; ++c)
                while (cursor[c] < streams[c].times.size()
                       && streams[c].times[cursor[c]] <= event.time)
                    apply_deposit(static_cast<int>(c));

            if (event.kind == EventKind::Service)
            {
                auto outcome = handle_service(states[event.cluster],
                                              city.clusters[event.cluster].capacity, event.time);
                result.totals.collected_l += outcome.collected_l;
                result.totals.overflow_l += outcome.overflow_l;
                result.log.events.push_back({event.time, EventKind::Service, event.cluster,
                                             event.vehicle, outcome.fill_pct,
                                             outcome.overflow_l});
            }
            else
            {
                result.log.events.push_back(
                    {event.time, EventKind::Break, -1, event.vehicle});
            }
        }

        for (std::size_t c = 0; c < numClusters; ++c)
            while (cursor[c] < streams[c].times.size() && streams[c].times[cursor[c]] < dayEnd)
                apply_deposit(static_cast<int>(c));
    }

    for (auto const& state : states)
        result.totals.remaining_l += state.hidden_volume;

    // Cluster states were advanced stream by stream; restore global time order
    // in the log.
    std::stable_sort(result.log.events.begin(), result.log.events.end(),
                     [](const EventRow& a, const EventRow& b) {
                         if (a.time != b.time)
                             return a.time < b.time;
                         if (kind_rank(a.kind) != kind_rank(b.kind))
                             return kind_rank(a.kind) < kind_rank(b.kind);
                         if (a.cluster != b.cluster)
                             return a.cluster < b.cluster;
                         return a.vehicle < b.vehicle;
                     });

    result.measures = compute_measures(result.log, config.warmup_days);
    return result;
}

void save_event_log(const EventLog& log, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write event log: " + path);

    out << "time,kind,cluster,vehicle,fill_pct,overflow_l\n";
    char buf[128];
    for (auto const& event : log.events)
    {
        std::snprintf(buf, sizeof(buf), "%lld,%s,%d,%d,%.6f,%.6f\n",
                      static_cast<long long>(event.time), kind_name(event.kind), event.cluster,
                      event.vehicle, event.fill_pct, event.overflow_l);
        out << buf;
    }
}

}  // namespace waste
