#include "waste/local_search.hpp"

#include <algorithm>
#include <stdexcept>

namespace waste {

namespace {

constexpr double kImproveEps = 1e-7;  // guards against float-noise cycling

}  // namespace

LocalSearch::LocalSearch(const RoutingInstance& instance, const Neighbourhood& neighbourhood)
    : inst_(instance), nbh_(neighbourhood)
{
    if (static_cast<int>(nbh_.lists.size()) != inst_.num_clusters())
        throw std::invalid_argument("neighbourhood does not match the instance");
}

void LocalSearch::run(Solution& solution, const PenaltyWeights& weights, Rng& rng)
{
    w_ = weights;
    load(solution);

    bool improved = true;
    while (improved)
    {
        improved = false;
        improved |= removal_pass();
        improved |= insertion_pass();
        improved |= sweep(rng);
    }
    store(solution);
}

void LocalSearch::load(const Solution& solution)
{
    if (static_cast<int>(solution.routes.size()) > inst_.num_vehicles)
        throw std::invalid_argument("solution uses more routes than vehicles");

    routes_.assign(inst_.num_vehicles, {});
    for (std::size_t r = 0; r < solution.routes.size(); ++r)
        routes_[r] = solution.routes[r];

    loc_.assign(inst_.nodes.size(), {});
    for (auto& entry : loc_)
        entry = {-1, -1};

    cost_.assign(inst_.num_vehicles, 0.0);
    for (int r = 0; r < inst_.num_vehicles; ++r)
    {
        reindex(r);
        cost_[r] = eval_cost(routes_[r]);
    }
}

void LocalSearch::store(Solution& solution) const { solution.routes = routes_; }

double LocalSearch::eval_cost(const std::vector<int>& route) const
{
    return route_cost(evaluate_route(inst_, route), w_);
}

void LocalSearch::reindex(int route)
{
    for (std::size_t i = 0; i < routes_[route].size(); ++i)
        loc_[routes_[route][i]] = {route, static_cast<int>(i)};
}

void LocalSearch::apply(int route, std::vector<int> next)
{
    for (int node : routes_[route])
        loc_[node] = {-1, -1};
    routes_[route] = std::move(next);
    reindex(route);
    cost_[route] = eval_cost(routes_[route]);
}

void LocalSearch::apply_pair(int routeA, std::vector<int> nextA, int routeB, std::vector<int> nextB)
{
    for (int node : routes_[routeA])
        loc_[node] = {-1, -1};
    for (int node : routes_[routeB])
        loc_[node] = {-1, -1};
    routes_[routeA] = std::move(nextA);
    routes_[routeB] = std::move(nextB);
    reindex(routeA);
    reindex(routeB);
    cost_[routeA] = eval_cost(routes_[routeA]);
    cost_[routeB] = eval_cost(routes_[routeB]);
}

bool LocalSearch::removal_pass()
{
    bool improved = false;
    for (int s = 0; s < inst_.num_clusters(); ++s)
    {
        if (inst_.prizes[s].required)
            continue;
        int node = inst_.cluster_node(s);
        if (!visited(node))
            continue;

        auto [r, pos] = loc_[node];
        std::vector<int> next = routes_[r];
        next.erase(next.begin() + pos);

        double delta = eval_cost(next) - cost_[r] + inst_.prizes[s].value;
        if (delta < -kImproveEps)
        {
            apply(r, std::move(next));
            improved = true;
        }
    }
    return improved;
}

bool LocalSearch::insertion_pass()
{
    bool improved = false;
    for (int s = 0; s < inst_.num_clusters(); ++s)
    {
        int node = inst_.cluster_node(s);
        if (visited(node))
            continue;

        // Candidate slots: before and after every visited neighbour, plus the
        // head of each route so empty routes stay reachable.
        std::vector<std::pair<int, int>> slots;
        for (int r = 0; r < inst_.num_vehicles; ++r)
            slots.emplace_back(r, 0);
        for (int other : nbh_.lists[s])
            if (visited(other))
            {
                auto [r, pos] = loc_[other];
                slots.emplace_back(r, pos);
                slots.emplace_back(r, pos + 1);
            }
        std::sort(slots.begin(), slots.end());
        slots.erase(std::unique(slots.begin(), slots.end()), slots.end());

        double bestDelta = 0;
        int bestRoute = -1, bestPos = -1;
        bool first = true;
        for (auto [r, pos] : slots)
        {
            std::vector<int> next = routes_[r];
            next.insert(next.begin() + pos, node);
            double delta = eval_cost(next) - cost_[r];
            if (first || delta < bestDelta)
            {
                bestDelta = delta;
                bestRoute = r;
                bestPos = pos;
                first = false;
            }
        }

        bool insert = inst_.prizes[s].required
                      || bestDelta - inst_.prizes[s].value < -kImproveEps;
        if (insert)
        {
            std::vector<int> next = routes_[bestRoute];
            next.insert(next.begin() + bestPos, node);
            apply(bestRoute, std::move(next));
            improved = true;
        }
    }
    return improved;
}

bool LocalSearch::sweep(Rng& rng)
{
    order_.clear();
    for (int s = 0; s < inst_.num_clusters(); ++s)
        if (visited(inst_.cluster_node(s)))
            order_.push_back(inst_.cluster_node(s));
    rng.shuffle(order_);

    bool improved = false;
    for (int u : order_)
    {
        for (int v : nbh_.lists[slot(u)])
        {
            if (v == u || !visited(v))
                continue;

            for (int n = 1; n <= 3; ++n)
                for (int m = 0; m <= n; ++m)
                    improved |= try_exchange(u, v, n, m);
            improved |= try_tail_swap(u, v);
            improved |= try_swap_star(u, v);
        }
        for (int n = 1; n <= 3; ++n)
            improved |= try_relocate_empty(u, n);
    }
    return improved;
}

bool LocalSearch::try_exchange(int u, int v, int n, int m)
{
    auto [a, pa] = loc_[u];
    auto [b, pb] = loc_[v];
    auto lenA = static_cast<int>(routes_[a].size());
    auto lenB = static_cast<int>(routes_[b].size());

    if (pa + n > lenA)
        return false;

    if (a == b)
    {
        if (m == 0)
        {
            // Move the segment behind v within the same route.
            if (pb >= pa && pb < pa + n)
                return false;

            std::vector<int> next = routes_[a];
            next.erase(next.begin() + pa, next.begin() + pa + n);
            int target = pb < pa ? pb + 1 : pb + 1 - n;
            if (target == pa)
                return false;  // no-op
            next.insert(next.begin() + target, routes_[a].begin() + pa,
                        routes_[a].begin() + pa + n);

            double delta = eval_cost(next) - cost_[a];
            if (delta >= -kImproveEps)
                return false;
            apply(a, std::move(next));
            return true;
        }

        if (pb + m > lenA)
            return false;
        bool disjoint = pb >= pa + n || pa >= pb + m;
        if (!disjoint)
            return false;

        auto const& old = routes_[a];
        std::vector<int> next;
        next.reserve(old.size());
        for (int i = 0; i < lenA;)
        {
            if (i == pa)
            {
                next.insert(next.end(), old.begin() + pb, old.begin() + pb + m);
                i += n;
            }
            else if (i == pb)
            {
                next.insert(next.end(), old.begin() + pa, old.begin() + pa + n);
                i += m;
            }
            else
            {
                next.push_back(old[i]);
                ++i;
            }
        }

        double delta = eval_cost(next) - cost_[a];
        if (delta >= -kImproveEps)
            return false;
        apply(a, std::move(next));
        return true;
    }

    if (pb + m > lenB)
        return false;

    std::vector<int> nextA = routes_[a];
    std::vector<int> nextB = routes_[b];
    if (m == 0)
    {
        nextA.erase(nextA.begin() + pa, nextA.begin() + pa + n);
        nextB.insert(nextB.begin() + pb + 1, routes_[a].begin() + pa, routes_[a].begin() + pa + n);
    }
    else
    {
        nextA.erase(nextA.begin() + pa, nextA.begin() + pa + n);
        nextA.insert(nextA.begin() + pa, routes_[b].begin() + pb, routes_[b].begin() + pb + m);
        nextB.erase(nextB.begin() + pb, nextB.begin() + pb + m);
        nextB.insert(nextB.begin() + pb, routes_[a].begin() + pa, routes_[a].begin() + pa + n);
    }

    double delta = eval_cost(nextA) + eval_cost(nextB) - cost_[a] - cost_[b];
    if (delta >= -kImproveEps)
        return false;
    apply_pair(a, std::move(nextA), b, std::move(nextB));
    return true;
}

bool LocalSearch::try_tail_swap(int u, int v)
{
    auto [a, pa] = loc_[u];
    auto [b, pb] = loc_[v];
    if (a == b)
        return false;

    std::vector<int> nextA(routes_[a].begin(), routes_[a].begin() + pa + 1);
    nextA.insert(nextA.end(), routes_[b].begin() + pb + 1, routes_[b].end());
    std::vector<int> nextB(routes_[b].begin(), routes_[b].begin() + pb + 1);
    nextB.insert(nextB.end(), routes_[a].begin() + pa + 1, routes_[a].end());

    double delta = eval_cost(nextA) + eval_cost(nextB) - cost_[a] - cost_[b];
    if (delta >= -kImproveEps)
        return false;
    apply_pair(a, std::move(nextA), b, std::move(nextB));
    return true;
}

bool LocalSearch::try_swap_star(int u, int v)
{
    auto [a, pa] = loc_[u];
    auto [b, pb] = loc_[v];
    if (a == b)
        return false;

    std::vector<int> baseA = routes_[a];
    baseA.erase(baseA.begin() + pa);
    std::vector<int> baseB = routes_[b];
    baseB.erase(baseB.begin() + pb);

    auto best_insert = [&](std::vector<int> const& base, int node, int& bestPos) {
        double best = 0;
        bool first = true;
        for (std::size_t pos = 0; pos <= base.size(); ++pos)
        {
            std::vector<int> candidate = base;
            candidate.insert(candidate.begin() + pos, node);
            double cost = eval_cost(candidate);
            if (first || cost < best)
            {
                best = cost;
                bestPos = static_cast<int>(pos);
                first = false;
            }
        }
        return best;
    };

    int posU = 0, posV = 0;
    double costB = best_insert(baseB, u, posU);
    double costA = best_insert(baseA, v, posV);

    double delta = costA + costB - cost_[a] - cost_[b];
    if (delta >= -kImproveEps)
        return false;

    baseA.insert(baseA.begin() + posV, v);
    baseB.insert(baseB.begin() + posU, u);
    apply_pair(a, std::move(baseA), b, std::move(baseB));
    return true;
}

bool LocalSearch::try_relocate_empty(int u, int n)
{
    auto [a, pa] = loc_[u];
    if (pa + n > static_cast<int>(routes_[a].size()))
        return false;
    if (static_cast<int>(routes_[a].size()) == n)
        return false;  // already its own route

    int empty = -1;
    for (int r = 0; r < inst_.num_vehicles; ++r)
        if (routes_[r].empty())
        {
            empty = r;
            break;
        }
    if (empty < 0)
        return false;

    std::vector<int> nextA = routes_[a];
    nextA.erase(nextA.begin() + pa, nextA.begin() + pa + n);
    std::vector<int> nextE(routes_[a].begin() + pa, routes_[a].begin() + pa + n);

    double delta = eval_cost(nextA) + eval_cost(nextE) - cost_[a] - cost_[empty];
    if (delta >= -kImproveEps)
        return false;
    apply_pair(a, std::move(nextA), empty, std::move(nextE));
    return true;
}

}  // namespace waste
