#pragma once

#include "waste/local_search.hpp"
#include "waste/solution.hpp"

#include <cstdint>
#include <string>

namespace waste {

struct SolveParams
{
    std::uint64_t seed = 1;
    int max_iterations = 1000;  // crossovers after the initial population
    double max_seconds = 0;     // wall-clock cap, 0 = none; breaks bit-reproducibility

    int min_pop_size = 25;
    int generation_size = 40;
    double elite_fraction = 0.5;
    int close_count = 5;  // neighbours considered for the diversity score
    int neighbourhood_k = 40;

    double initial_time_warp_penalty = 1.0;
    double penalty_low = 0.35;   // feasible-offspring band steering the penalties
    double penalty_high = 0.45;
    double penalty_factor = 1.25;
    int penalty_interval = 100;  // offspring between penalty updates
};

struct SolveReport
{
    Solution best;
    Evaluation eval;  // of `best`, at unit penalty weights
    bool found_feasible = false;
    bool provably_infeasible = false;
    std::string infeasibility_note;
    double initial_best_cost = 0;  // best feasible cost in the initial population; inf if none
    int iterations = 0;
};

// Hybrid genetic search over feasible and infeasible subpopulations. Fully
// deterministic for a fixed seed and iteration budget.
SolveReport solve_hgs(const RoutingInstance& instance, const SolveParams& params);

}  // namespace waste
