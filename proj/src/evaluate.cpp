#include "waste/solution.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace waste {

void canonicalize(Solution& solution)
{
    std::sort(solution.routes.begin(), solution.routes.end(),
              [](auto const& a, auto const& b) {
                  if (a.empty() || b.empty())
                      return !a.empty() && b.empty();
                  return a < b;
              });
}

namespace {

struct ForwardPass
{
    std::vector<Seconds> departAfter;  // departAfter[k]: departure after k elements
    Seconds endArrival = 0;            // arrival at the destination depot
};

// Times `seq` (clusters and already-placed breaks) without recording stops.
ForwardPass time_sequence(const RoutingInstance& instance, const std::vector<int>& seq)
{
    ForwardPass pass;
    pass.departAfter.reserve(seq.size() + 1);
    pass.departAfter.push_back(0);

    Seconds t = 0;
    int prev = 0;  // origin depot
    for (int node : seq)
    {
        Seconds arrive = t + instance.dur(prev, node);
        Seconds start = std::clamp(arrive, instance.nodes[node].early, instance.nodes[node].late);
        t = start + instance.nodes[node].service;
        pass.departAfter.push_back(t);
        prev = node;
    }
    pass.endArrival = t + instance.dur(prev, 1);
    return pass;
}

}  // namespace

RouteEval evaluate_route(const RoutingInstance& instance, const std::vector<int>& route,
                         std::vector<ScheduledStop>* schedule)
{
    RouteEval eval;
    if (schedule)
        schedule->clear();
    if (route.empty())
        return eval;

    // Place mandatory breaks, earliest window first. A break applies to any
    // route still under way at its earliest start and goes to the latest
    // position from which the depot is reached by the break's latest start.
    std::vector<int> seq = route;
    std::size_t minSlot = 0;
    for (int b = 2; b < 2 + instance.num_breaks(); ++b)
    {
        auto pass = time_sequence(instance, seq);
        if (pass.endArrival <= instance.nodes[b].early)
            continue;

        std::size_t slot = minSlot;
        bool found = false;
        for (std::size_t k = seq.size() + 1; k-- > minSlot;)
        {
            int prev = k == 0 ? 0 : seq[k - 1];
            if (pass.departAfter[k] + instance.dur(prev, b) <= instance.nodes[b].late)
            {
                slot = k;
                found = true;
                break;
            }
        }
        eval.break_fallback |= !found;

        seq.insert(seq.begin() + slot, b);
        minSlot = slot + 1;
    }

    Seconds t = 0;
    int prev = 0;
    double load = 0;
    if (schedule)
        schedule->push_back({0, 0, 0});
    for (int node : seq)
    {
        auto const& data = instance.nodes[node];
        eval.distance += instance.dist(prev, node);
        Seconds arrive = t + instance.dur(prev, node);
        Seconds start = arrive;
        if (arrive < data.early)
        {
            eval.wait += data.early - arrive;
            start = data.early;
        }
        else if (arrive > data.late)
        {
            eval.time_warp += arrive - data.late;
            start = data.late;
        }
        if (schedule)
            schedule->push_back({node, arrive, start});
        t = start + data.service;
        prev = node;
        if (!instance.demands.empty() && data.cluster_slot >= 0)
            load += instance.demands[data.cluster_slot];
    }

    eval.distance += instance.dist(prev, 1);
    eval.end_time = t + instance.dur(prev, 1);
    if (eval.end_time > instance.horizon)
        eval.time_warp += eval.end_time - instance.horizon;
    if (schedule)
        schedule->push_back({1, eval.end_time, std::min(eval.end_time, instance.horizon)});

    if (instance.vehicle_capacity > 0)
        eval.excess_load = std::max(0.0, load - instance.vehicle_capacity);
    return eval;
}

double route_cost(const RouteEval& eval, const PenaltyWeights& weights)
{
    return static_cast<double>(eval.distance) + weights.time_warp * static_cast<double>(eval.time_warp)
           + weights.load * eval.excess_load;
}

Evaluation evaluate(const RoutingInstance& instance, const Solution& solution,
                    const PenaltyWeights& weights)
{
    std::vector<char> visited(instance.num_clusters(), 0);
    for (auto const& route : solution.routes)
        for (int node : route)
        {
            if (node < instance.first_cluster_node() || node >= static_cast<int>(instance.nodes.size()))
                throw std::logic_error("solution routes must contain cluster nodes only");
            int slot = instance.nodes[node].cluster_slot;
            if (visited[slot]++)
                throw std::logic_error("cluster visited more than once");
        }

    if (static_cast<int>(solution.routes.size()) > instance.num_vehicles)
        throw std::logic_error("solution uses more routes than vehicles");

    Evaluation eval;
    for (auto const& route : solution.routes)
    {
        auto routeEval = evaluate_route(instance, route);
        eval.distance += routeEval.distance;
        eval.wait += routeEval.wait;
        eval.time_warp += routeEval.time_warp;
        eval.excess_load += routeEval.excess_load;
    }

    for (int slot = 0; slot < instance.num_clusters(); ++slot)
        if (!visited[slot])
        {
            if (instance.prizes[slot].required)
                eval.required_missing = true;
            else
                eval.uncollected_prize += instance.prizes[slot].value;
        }

    eval.feasible = eval.time_warp == 0 && eval.excess_load == 0 && !eval.required_missing;
    eval.penalised_cost = static_cast<double>(eval.distance) + eval.uncollected_prize
                          + weights.time_warp * static_cast<double>(eval.time_warp)
                          + weights.load * eval.excess_load;
    return eval;
}

std::vector<std::vector<ScheduledStop>> schedule_solution(const RoutingInstance& instance,
                                                          const Solution& solution)
{
    std::vector<std::vector<ScheduledStop>> schedules(solution.routes.size());
    for (std::size_t r = 0; r < solution.routes.size(); ++r)
        evaluate_route(instance, solution.routes[r], &schedules[r]);
    return schedules;
}

std::string format_solution(const RoutingInstance& instance, const Solution& solution,
                            const PenaltyWeights& weights)
{
    std::string text;
    char buf[64];

    auto schedules = schedule_solution(instance, solution);
    for (std::size_t r = 0; r < schedules.size(); ++r)
    {
        text += "route " + std::to_string(r + 1) + ":";
        if (solution.routes[r].empty())
        {
            text += " unused";
        }
        else
        {
            for (auto const& stop : schedules[r])
            {
                auto const& node = instance.nodes[stop.node];
                if (node.kind == NodeKind::Depot)
                    std::snprintf(buf, sizeof(buf), " %s@%lld", stop.node == 0 ? "start" : "end",
                                  static_cast<long long>(stop.start));
                else if (node.kind == NodeKind::Break)
                    std::snprintf(buf, sizeof(buf), " b%d@%lld", stop.node - 2,
                                  static_cast<long long>(stop.start));
                else
                    std::snprintf(buf, sizeof(buf), " c%d@%lld",
                                  instance.cluster_ids[node.cluster_slot],
                                  static_cast<long long>(stop.start));
                text += buf;
            }
        }
        text += "\n";
    }

    auto eval = evaluate(instance, solution, weights);
    text += "objective:\n";
    std::snprintf(buf, sizeof(buf), "  distance_m %lld\n", static_cast<long long>(eval.distance));
    text += buf;
    std::snprintf(buf, sizeof(buf), "  uncollected_prize_m %.9g\n", eval.uncollected_prize);
    text += buf;
    std::snprintf(buf, sizeof(buf), "  wait_s %lld\n", static_cast<long long>(eval.wait));
    text += buf;
    std::snprintf(buf, sizeof(buf), "  time_warp_s %lld\n", static_cast<long long>(eval.time_warp));
    text += buf;
    if (instance.vehicle_capacity > 0)
    {
        std::snprintf(buf, sizeof(buf), "  excess_load %.9g\n", eval.excess_load);
        text += buf;
    }
    std::snprintf(buf, sizeof(buf), "  penalised_cost_m %.9g\n", eval.penalised_cost);
    text += buf;
    std::snprintf(buf, sizeof(buf), "  feasible %d\n", eval.feasible ? 1 : 0);
    text += buf;
    return text;
}

}  // namespace waste
