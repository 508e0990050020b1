#pragma once

#include "waste/neighbourhood.hpp"
#include "waste/rng.hpp"
#include "waste/solution.hpp"

namespace waste {

// Granular local search. Each improvement pass first drops optional clusters
// whose removal pays, then re-inserts missing clusters (required ones
// unconditionally, optional ones when profitable), then runs segment
// exchanges, tail swaps, and paired best-position swaps restricted to the
// correlation neighbourhoods. Runs to a local optimum and never increases the
// penalised cost.
class LocalSearch
{
public:
    LocalSearch(const RoutingInstance& instance, const Neighbourhood& neighbourhood);

    void run(Solution& solution, const PenaltyWeights& weights, Rng& rng);

private:
    struct Loc
    {
        int route = -1;
        int pos = -1;
    };

    const RoutingInstance& inst_;
    const Neighbourhood& nbh_;
    PenaltyWeights w_;

    std::vector<std::vector<int>> routes_;
    std::vector<double> cost_;  // cached route_cost per route
    std::vector<Loc> loc_;      // indexed by node id; route -1 = unvisited
    std::vector<int> order_;    // scratch for sweep order

    bool visited(int node) const { return loc_[node].route >= 0; }
    int slot(int node) const { return inst_.nodes[node].cluster_slot; }

    void load(const Solution& solution);
    void store(Solution& solution) const;

    double eval_cost(const std::vector<int>& route) const;
    void reindex(int route);
    void apply(int route, std::vector<int> next);
    void apply_pair(int routeA, std::vector<int> nextA, int routeB, std::vector<int> nextB);

    bool removal_pass();
    bool insertion_pass();
    bool sweep(Rng& rng);

    bool try_exchange(int u, int v, int n, int m);
    bool try_tail_swap(int u, int v);
    bool try_swap_star(int u, int v);
    bool try_relocate_empty(int u, int n);
};

}  // namespace waste
