#pragma once

#include "waste/solution.hpp"

#include <cstdint>
#include <vector>

namespace waste {

struct BruteForceResult
{
    Solution best;  // canonical; empty routes padded to the vehicle count
    double cost = 0;
    bool feasible = false;

    // Bitmasks over cluster slots of every visit set that attains the optimal
    // cost (within the tie epsilon), ascending.
    std::vector<std::uint32_t> optimal_visit_sets;
};

// Exhaustive reference solver: every subset of optional clusters, every visit
// order, every assignment to vehicles, timed by the same route evaluation the
// heuristic uses. Only instances with at most 10 clusters and 3 vehicles are
// accepted.
BruteForceResult brute_force_solve(const RoutingInstance& instance, double tieEps = 1e-9);

}  // namespace waste
