#pragma once

#include "waste/core.hpp"

namespace waste {

inline constexpr double kDefaultBetaWait = 0.2;
inline constexpr double kDefaultBetaTw = 1.0;

// Relatedness of visiting cluster j directly after cluster i: distance plus
// weighted minimum wait and minimum time warp of the pair, minus j's prize
// (required clusters contribute no prize term). Lower is more related.
double correlation(const RoutingInstance& instance, int slotI, int slotJ,
                   double betaWait = kDefaultBetaWait, double betaTw = kDefaultBetaTw);

// Per cluster: the k most related other clusters, ascending by correlation,
// ties broken towards the smaller node id. Depots and breaks never appear.
struct Neighbourhood
{
    int k = 0;
    std::vector<std::vector<int>> lists;  // cluster node ids, indexed by cluster slot
};

Neighbourhood build_neighbourhoods(const RoutingInstance& instance, int k,
                                   double betaWait = kDefaultBetaWait,
                                   double betaTw = kDefaultBetaTw);

// Single-threaded reference implementation; must match build_neighbourhoods
// exactly for any thread count.
Neighbourhood build_neighbourhoods_serial(const RoutingInstance& instance, int k,
                                          double betaWait = kDefaultBetaWait,
                                          double betaTw = kDefaultBetaTw);

}  // namespace waste
