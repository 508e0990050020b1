#include "waste/hgs.hpp"

#include "waste/neighbourhood.hpp"
#include "waste/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace waste {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Individual
{
    Solution sol;
    Evaluation eval;
    std::vector<int> succ;  // successor node per cluster slot; -1 route end, -2 unvisited
};

std::vector<int> signature(const RoutingInstance& inst, const Solution& sol)
{
    std::vector<int> succ(inst.num_clusters(), -2);
    for (auto const& route : sol.routes)
        for (std::size_t i = 0; i < route.size(); ++i)
        {
            int slot = inst.nodes[route[i]].cluster_slot;
            succ[slot] = i + 1 < route.size() ? route[i + 1] : -1;
        }
    return succ;
}

double broken_pairs(const std::vector<int>& a, const std::vector<int>& b)
{
    if (a.empty())
        return 0;
    int differ = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        differ += a[i] != b[i];
    return static_cast<double>(differ) / static_cast<double>(a.size());
}

// One subpopulation with cached pairwise diversity distances.
class SubPop
{
public:
    SubPop(const SolveParams& params) : params_(params) {}

    std::size_t size() const { return members_.size(); }
    const Individual& operator[](std::size_t i) const { return members_[i]; }
    double fitness(std::size_t i) const { return fitness_[i]; }

    void add(Individual individual)
    {
        std::vector<double> row(members_.size() + 1, 0.0);
        for (std::size_t j = 0; j < members_.size(); ++j)
        {
            row[j] = broken_pairs(individual.succ, members_[j].succ);
            dist_[j].push_back(row[j]);
        }
        dist_.push_back(std::move(row));
        members_.push_back(std::move(individual));
        dirty_ = true;

        if (size() >= std::size_t(params_.min_pop_size + params_.generation_size))
            shrink();
    }

    void refresh()
    {
        if (dirty_)
            update_fitness();
    }

private:
    void remove(std::size_t victim)
    {
        members_.erase(members_.begin() + victim);
        dist_.erase(dist_.begin() + victim);
        for (auto& row : dist_)
            row.erase(row.begin() + victim);
        dirty_ = true;
    }

    void shrink()
    {
        while (size() > std::size_t(params_.min_pop_size))
        {
            update_fitness();

            // Clones go first, worst fitness as tie-break; then worst fitness.
            std::size_t victim = size();
            double worst = -kInf;
            for (std::size_t i = 0; i < size(); ++i)
            {
                bool clone = false;
                for (std::size_t j = 0; j < size() && !clone; ++j)
                    clone = i != j && dist_[i][j] == 0.0;
                if (clone && fitness_[i] > worst)
                {
                    victim = i;
                    worst = fitness_[i];
                }
            }
            if (victim == size())
            {
                for (std::size_t i = 0; i < size(); ++i)
                    if (fitness_[i] > worst)
                    {
                        victim = i;
                        worst = fitness_[i];
                    }
            }
            remove(victim);
        }
    }

    void update_fitness()
    {
        auto count = size();
        fitness_.assign(count, 0.0);
        if (count == 0)
        {
            dirty_ = false;
            return;
        }

        std::vector<std::size_t> byCost(count);
        std::iota(byCost.begin(), byCost.end(), 0);
        std::stable_sort(byCost.begin(), byCost.end(), [&](std::size_t a, std::size_t b) {
            return members_[a].eval.penalised_cost < members_[b].eval.penalised_cost;
        });

        std::vector<double> spread(count, 0.0);
        auto close = std::min<std::size_t>(params_.close_count, count - 1);
        if (close > 0)
        {
            std::vector<double> row;
            for (std::size_t i = 0; i < count; ++i)
            {
                row.assign(dist_[i].begin(), dist_[i].end());
                row.erase(row.begin() + i);
                std::nth_element(row.begin(), row.begin() + close - 1, row.end());
                spread[i] = std::accumulate(row.begin(), row.begin() + close, 0.0)
                            / static_cast<double>(close);
            }
        }
        std::vector<std::size_t> bySpread(count);
        std::iota(bySpread.begin(), bySpread.end(), 0);
        std::stable_sort(bySpread.begin(), bySpread.end(), [&](std::size_t a, std::size_t b) {
            return spread[a] > spread[b];
        });

        auto elite = static_cast<double>(std::lround(params_.elite_fraction * params_.min_pop_size));
        double diversityWeight = 1.0 - elite / static_cast<double>(count);
        diversityWeight = std::max(diversityWeight, 0.0);
        for (std::size_t rank = 0; rank < count; ++rank)
        {
            fitness_[byCost[rank]] += static_cast<double>(rank);
            fitness_[bySpread[rank]] += diversityWeight * static_cast<double>(rank);
        }
        dirty_ = false;
    }

    const SolveParams& params_;
    std::vector<Individual> members_;
    std::vector<std::vector<double>> dist_;
    std::vector<double> fitness_;
    bool dirty_ = false;
};

Solution random_solution(const RoutingInstance& inst, Rng& rng)
{
    double includeProb = rng.uniform() * 0.9;
    std::vector<int> chosen;
    for (int s = 0; s < inst.num_clusters(); ++s)
        if (inst.prizes[s].required || rng.uniform() < includeProb)
            chosen.push_back(inst.cluster_node(s));
    rng.shuffle(chosen);

    Solution sol;
    sol.routes.assign(inst.num_vehicles, {});
    for (int node : chosen)
        sol.routes[rng.uniform_int(0, inst.num_vehicles - 1)].push_back(node);
    return sol;
}

Solution crossover(const RoutingInstance& inst, const Solution& a, const Solution& b, Rng& rng)
{
    auto keep = rng.uniform_int(0, inst.num_vehicles);

    std::vector<int> orderA(a.routes.size());
    std::iota(orderA.begin(), orderA.end(), 0);
    rng.shuffle(orderA);
    std::vector<int> orderB(b.routes.size());
    std::iota(orderB.begin(), orderB.end(), 0);
    rng.shuffle(orderB);

    Solution child;
    child.routes.assign(inst.num_vehicles, {});
    std::vector<char> taken(inst.nodes.size(), 0);

    int slot = 0;
    for (int r = 0; r < keep && r < static_cast<int>(orderA.size()); ++r)
    {
        child.routes[slot] = a.routes[orderA[r]];
        for (int node : child.routes[slot])
            taken[node] = 1;
        ++slot;
    }
    for (int r = 0; slot < inst.num_vehicles && r < static_cast<int>(orderB.size()); ++r)
    {
        auto& route = child.routes[slot];
        for (int node : b.routes[orderB[r]])
            if (!taken[node])
            {
                route.push_back(node);
                taken[node] = 1;
            }
        ++slot;
    }
    return child;
}

struct Best
{
    Solution sol;
    double cost = kInf;
    Seconds violation = std::numeric_limits<Seconds>::max();
    bool feasible = false;

    void offer(const RoutingInstance& inst, const Solution& candidate, const Evaluation& eval)
    {
        if (eval.feasible)
        {
            if (!feasible || eval.cost() < cost)
            {
                feasible = true;
                cost = eval.cost();
                sol = candidate;
            }
            return;
        }
        if (feasible)
            return;

        auto badness = eval.time_warp + static_cast<Seconds>(std::ceil(eval.excess_load))
                       + (eval.required_missing ? inst.horizon : 0);
        if (badness < violation || (badness == violation && eval.penalised_cost < cost))
        {
            violation = badness;
            cost = eval.penalised_cost;
            sol = candidate;
        }
    }
};

}  // namespace

SolveReport solve_hgs(const RoutingInstance& inst, const SolveParams& params)
{
    SolveReport report;
    report.initial_best_cost = kInf;

    // A required cluster that cannot be reached inside its window, or whose
    // round trip exceeds the shift, makes the whole instance infeasible.
    // Breaks only tighten timing, so this check is conservative.
    for (int s = 0; s < inst.num_clusters(); ++s)
    {
        if (!inst.prizes[s].required)
            continue;
        int node = inst.cluster_node(s);
        auto const& data = inst.nodes[node];
        Seconds arrive = inst.dur(0, node);
        Seconds departure = std::max(arrive, data.early) + data.service;
        if (arrive > data.late || departure + inst.dur(node, 1) > inst.horizon)
        {
            report.provably_infeasible = true;
            report.infeasibility_note =
                "required cluster " + std::to_string(inst.cluster_ids[s])
                + " cannot be served within its window and the shift";
            break;
        }
    }

    Rng rng(params.seed);
    auto neighbourhood = build_neighbourhoods(inst, params.neighbourhood_k);
    LocalSearch search(inst, neighbourhood);

    PenaltyWeights weights{params.initial_time_warp_penalty, params.initial_time_warp_penalty};
    PenaltyWeights unit{1.0, 1.0};

    SubPop feasiblePop(params);
    SubPop infeasiblePop(params);
    Best best;

    struct Outcome
    {
        bool feasible;
        Solution sol;
    };
    auto educate_and_register = [&](Solution sol, bool countInitial) -> Outcome {
        search.run(sol, weights, rng);
        canonicalize(sol);
        auto eval = evaluate(inst, sol, weights);
        best.offer(inst, sol, eval);
        if (countInitial && eval.feasible)
            report.initial_best_cost = std::min(report.initial_best_cost, eval.cost());

        bool feasible = eval.feasible;
        Individual individual{sol, eval, {}};
        individual.succ = signature(inst, individual.sol);
        (feasible ? feasiblePop : infeasiblePop).add(std::move(individual));
        return {feasible, std::move(sol)};
    };

    auto startTime = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - startTime).count();
    };

    // At least one individual always enters the population, budget or not.
    for (int i = 0; i < params.min_pop_size; ++i)
    {
        if (i > 0 && params.max_seconds > 0 && elapsed() >= params.max_seconds)
            break;
        educate_and_register(random_solution(inst, rng), true);
    }

    auto pick = [&]() -> const Individual& {
        auto total = feasiblePop.size() + infeasiblePop.size();
        feasiblePop.refresh();
        infeasiblePop.refresh();
        auto draw = [&]() -> std::pair<const Individual*, double> {
            auto idx = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(total) - 1));
            if (idx < feasiblePop.size())
                return {&feasiblePop[idx], feasiblePop.fitness(idx)};
            idx -= feasiblePop.size();
            return {&infeasiblePop[idx], infeasiblePop.fitness(idx)};
        };
        auto first = draw();
        auto second = draw();
        return first.second <= second.second ? *first.first : *second.first;
    };

    int feasibleRecent = 0;
    int recentCount = 0;
    for (int iter = 0; iter < params.max_iterations; ++iter)
    {
        if (params.max_seconds > 0 && elapsed() >= params.max_seconds)
            break;

        auto const& parentA = pick();
        auto const& parentB = pick();
        Solution child = crossover(inst, parentA.sol, parentB.sol, rng);

        auto outcome = educate_and_register(std::move(child), false);
        feasibleRecent += outcome.feasible ? 1 : 0;
        if (!outcome.feasible && rng.uniform() < 0.5)
        {
            // Second education round under harsher penalties to steer the
            // offspring back to feasibility.
            PenaltyWeights harsh{weights.time_warp * 10, weights.load * 10};
            std::swap(weights, harsh);
            educate_and_register(std::move(outcome.sol), false);
            std::swap(weights, harsh);
        }
        if (++recentCount >= params.penalty_interval)
        {
            double frac = static_cast<double>(feasibleRecent) / recentCount;
            double factor = 1.0;
            if (frac < params.penalty_low)
                factor = params.penalty_factor;
            else if (frac > params.penalty_high)
                factor = 1.0 / params.penalty_factor;
            weights.time_warp = std::clamp(weights.time_warp * factor, 0.1, 1e6);
            weights.load = std::clamp(weights.load * factor, 0.1, 1e6);
            feasibleRecent = 0;
            recentCount = 0;
        }
        report.iterations = iter + 1;
    }

    canonicalize(best.sol);
    report.best = best.sol;
    report.eval = evaluate(inst, report.best, unit);
    report.found_feasible = best.feasible;
    return report;
}

}  // namespace waste
