#include "waste/neighbourhood.hpp"

#include <algorithm>
#include <stdexcept>

namespace waste {

double correlation(const RoutingInstance& instance, int slotI, int slotJ,
                   double betaWait, double betaTw)
{
    if (slotI == slotJ)
        throw std::invalid_argument("correlation of a cluster with itself is undefined");

    int i = instance.cluster_node(slotI);
    int j = instance.cluster_node(slotJ);
    auto const& ni = instance.nodes[i];
    auto const& nj = instance.nodes[j];

    auto travel = instance.dur(i, j);
    auto minWait = std::max<Seconds>(nj.early - ni.late - ni.service - travel, 0);
    auto minWarp = std::max<Seconds>(ni.early + ni.service + travel - nj.late, 0);
    double prize = instance.prizes[slotJ].required ? 0.0 : instance.prizes[slotJ].value;

    return static_cast<double>(instance.dist(i, j)) + betaWait * static_cast<double>(minWait)
           + betaTw * static_cast<double>(minWarp) - prize;
}

namespace {

void build_row(const RoutingInstance& instance, int slot, int k, double betaWait, double betaTw,
               std::vector<int>& out)
{
    int numClusters = instance.num_clusters();
    std::vector<std::pair<double, int>> scored;
    scored.reserve(numClusters - 1);
    for (int other = 0; other < numClusters; ++other)
        if (other != slot)
            scored.emplace_back(correlation(instance, slot, other, betaWait, betaTw),
                                instance.cluster_node(other));

    auto keep = std::min<std::size_t>(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end());
    out.clear();
    for (std::size_t idx = 0; idx < keep; ++idx)
        out.push_back(scored[idx].second);
}

}  // namespace

Neighbourhood build_neighbourhoods_serial(const RoutingInstance& instance, int k,
                                          double betaWait, double betaTw)
{
    if (k < 1)
        throw std::invalid_argument("neighbourhood size must be at least 1");

    Neighbourhood result;
    result.k = k;
    result.lists.resize(instance.num_clusters());
    for (int slot = 0; slot < instance.num_clusters(); ++slot)
        build_row(instance, slot, k, betaWait, betaTw, result.lists[slot]);
    return result;
}

Neighbourhood build_neighbourhoods(const RoutingInstance& instance, int k,
                                   double betaWait, double betaTw)
{
    if (k < 1)
        throw std::invalid_argument("neighbourhood size must be at least 1");

    Neighbourhood result;
    result.k = k;
    result.lists.resize(instance.num_clusters());

    int numClusters = instance.num_clusters();
#pragma omp parallel for schedule(static)
    for (int slot = 0; slot < numClusters; ++slot)
        build_row(instance, slot, k, betaWait, betaTw, result.lists[slot]);
    return result;
}

}  // namespace waste
