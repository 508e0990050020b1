#include "waste/brute_force.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace waste {

namespace {

struct Enumerator
{
    const RoutingInstance& inst;
    double tieEps;
    BruteForceResult out;

    std::vector<std::vector<int>> routes;

    void consider(double cost, std::uint32_t visitMask)
    {
        if (cost < out.cost - tieEps)
        {
            out.cost = cost;
            out.feasible = true;
            out.optimal_visit_sets.assign(1, visitMask);

            Solution sol;
            sol.routes = routes;
            sol.routes.resize(inst.num_vehicles);
            canonicalize(sol);
            out.best = std::move(sol);
            return;
        }
        if (cost <= out.cost + tieEps)
        {
            out.cost = std::min(out.cost, cost);
            auto& sets = out.optimal_visit_sets;
            if (std::find(sets.begin(), sets.end(), visitMask) == sets.end())
                sets.push_back(visitMask);
        }
    }

    // Cuts perm[from..] into at most `vehiclesLeft` further non-empty routes.
    void splits(const std::vector<int>& perm, std::size_t from, int vehiclesLeft,
                double uncollected, std::uint32_t visitMask)
    {
        if (from == perm.size())
        {
            std::int64_t distance = 0;
            for (auto const& route : routes)
            {
                auto eval = evaluate_route(inst, route);
                if (eval.time_warp > 0 || eval.excess_load > 0)
                    return;
                distance += eval.distance;
            }
            consider(static_cast<double>(distance) + uncollected, visitMask);
            return;
        }
        if (vehiclesLeft == 0)
            return;
        for (std::size_t cut = from + 1; cut <= perm.size(); ++cut)
        {
            routes.emplace_back(perm.begin() + from, perm.begin() + cut);
            splits(perm, cut, vehiclesLeft - 1, uncollected, visitMask);
            routes.pop_back();
        }
    }
};

}  // namespace

BruteForceResult brute_force_solve(const RoutingInstance& inst, double tieEps)
{
    if (inst.num_clusters() > 10)
        throw std::invalid_argument("brute force is limited to 10 clusters");
    if (inst.num_vehicles > 3)
        throw std::invalid_argument("brute force is limited to 3 vehicles");

    std::vector<int> requiredSlots;
    std::vector<int> optionalSlots;
    for (int s = 0; s < inst.num_clusters(); ++s)
        (inst.prizes[s].required ? requiredSlots : optionalSlots).push_back(s);

    Enumerator walk{inst, tieEps, {}, {}};
    walk.out.cost = std::numeric_limits<double>::infinity();
    walk.out.best.routes.resize(inst.num_vehicles);

    auto m = optionalSlots.size();
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
    {
        auto slots = requiredSlots;
        double uncollected = 0;
        for (std::size_t i = 0; i < m; ++i)
        {
            if (mask >> i & 1)
                slots.push_back(optionalSlots[i]);
            else
                uncollected += inst.prizes[optionalSlots[i]].value;
        }

        std::uint32_t visitMask = 0;
        std::vector<int> nodes;
        nodes.reserve(slots.size());
        for (int s : slots)
        {
            visitMask |= std::uint32_t{1} << s;
            nodes.push_back(inst.cluster_node(s));
        }
        std::sort(nodes.begin(), nodes.end());

        do
            walk.splits(nodes, 0, inst.num_vehicles, uncollected, visitMask);
        while (std::next_permutation(nodes.begin(), nodes.end()));
    }

    std::sort(walk.out.optimal_visit_sets.begin(), walk.out.optimal_visit_sets.end());
    if (!walk.out.feasible)
        walk.out.cost = 0;
    return walk.out;
}

}  // namespace waste
