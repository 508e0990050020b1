#include "waste/experiment.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

int run_gen_city(std::uint64_t seed, int clusters, double areaKm, const std::string& outDir)
{
    namespace fs = std::filesystem;
    fs::create_directories(outDir);

    auto city = waste::generate_city(seed, clusters, areaKm);
    auto matrix = waste::build_city_matrix(city);

    auto cityPath = (fs::path(outDir) / "city.json").string();
    auto matrixPath = (fs::path(outDir) / "city_matrix.txt").string();
    waste::save_city(city, cityPath);
    waste::save_matrix(matrix, matrixPath);
    std::printf("wrote %s\n", cityPath.c_str());
    std::printf("wrote %s\n", matrixPath.c_str());
    return kExitOk;
}

int run_simulate(const std::string& configPath)
{
    auto config = waste::load_experiment_config(configPath);
    auto output = waste::cmd_simulate(config);
    std::printf("wrote %s (%zu cells, %zu scenario means)\n", output.measures_path.c_str(),
                output.cells.size(), output.means.size());
    for (auto const& mean : output.means)
        std::printf("  %-40s distance %8.2f km/day   service level %6.2f%%\n",
                    mean.scenario.c_str(), mean.measures.avg_daily_distance_km,
                    mean.measures.service_level_pct);
    return kExitOk;
}

int run_tune(const std::string& configPath)
{
    auto config = waste::load_experiment_config(configPath);
    auto output = waste::cmd_tune(config);
    std::printf("wrote %s\n", output.distance_path.c_str());
    std::printf("wrote %s\n", output.service_path.c_str());
    std::printf("%zu epsilon values x %zu rho values\n", output.epsilons.size(),
                output.rhos.size());
    return kExitOk;
}

int run_solve(const std::string& instancePath, std::uint64_t seed, int iterations,
              double seconds)
{
    auto instance = waste::load_instance(instancePath);

    waste::SolveParams params;
    params.seed = seed;
    params.max_iterations = iterations;
    params.max_seconds = seconds;
    auto report = waste::solve_hgs(instance, params);

    if (report.provably_infeasible)
    {
        std::fprintf(stderr, "infeasible: %s\n", report.infeasibility_note.c_str());
        return kExitInfeasible;
    }

    std::fputs(waste::format_solution(instance, report.best, waste::PenaltyWeights{}).c_str(),
               stdout);
    std::printf("iterations %d\n", report.iterations);
    if (!report.found_feasible)
    {
        std::fprintf(stderr, "no feasible solution found; best infeasible shown\n");
        return kExitInfeasible;
    }
    return kExitOk;
}

int run_bench(const waste::BenchParams& params)
{
    auto output = waste::cmd_bench(params);
    std::printf("wrote %s\n", output.rows_path.c_str());
    std::printf("wrote %s\n", output.groups_path.c_str());
    for (auto const& row : output.rows)
    {
        std::printf("  %-20s seed %llu cost %12.2f %s", row.instance.c_str(),
                    static_cast<unsigned long long>(row.seed), row.cost,
                    row.feasible ? "feasible" : "INFEASIBLE");
        if (row.has_bks)
            std::printf("  gap %.2f%%", row.gap_pct);
        std::printf("\n");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Urban waste collection: prize-collecting routing, policies, simulation"};
    app.require_subcommand(1);

    auto* genCity = app.add_subcommand("gen-city", "Generate a synthetic city and travel matrix");
    std::uint64_t citySeed = 7;
    int cityClusters = 100;
    double cityArea = 10;
    std::string cityOut = ".";
    genCity->add_option("--seed", citySeed, "Generator seed");
    genCity->add_option("--clusters", cityClusters, "Number of container clusters")
        ->check(CLI::PositiveNumber);
    genCity->add_option("--area-km", cityArea, "Square side length in km")
        ->check(CLI::PositiveNumber);
    genCity->add_option("--out", cityOut, "Output directory");

    auto* simulate = app.add_subcommand("simulate", "Run all scenario x seed cells of a config");
    std::string simulateConfig;
    simulate->add_option("config", simulateConfig, "Experiment config (JSON)")->required();

    auto* tune = app.add_subcommand("tune", "Grid search over epsilon x rho");
    std::string tuneConfig;
    tune->add_option("config", tuneConfig, "Experiment config (JSON) with a tune block")
        ->required();

    auto* solve = app.add_subcommand("solve", "Solve one routing instance file");
    std::string solveInstance;
    std::uint64_t solveSeed = 1;
    int solveIterations = 2000;
    double solveSeconds = 0;
    solve->add_option("instance", solveInstance, "Instance file (JSON)")->required();
    solve->add_option("--seed", solveSeed, "Solver seed");
    solve->add_option("--iterations", solveIterations, "Iteration budget");
    solve->add_option("--seconds", solveSeconds,
                      "Wall-clock budget (breaks run-to-run reproducibility)");

    auto* bench = app.add_subcommand("bench", "Prize-collecting benchmark harness");
    waste::BenchParams benchParams;
    bench->add_option("instances", benchParams.instance_files, "Solomon-format instance files")
        ->required();
    bench->add_option("--bks", benchParams.bks_file, "Best-known-solution CSV (instance,cost)");
    bench->add_option("--seeds", benchParams.seeds, "Solver seeds");
    bench->add_option("--prize-seed", benchParams.prize_seed, "Prize generation seed");
    bench->add_option("--iterations", benchParams.max_iterations, "Iteration budget");
    bench->add_option("--seconds", benchParams.max_seconds,
                      "Wall-clock budget per run, 0 to disable");
    bench->add_option("--out", benchParams.output_dir, "Output directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& error)
    {
        int code = app.exit(error);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try
    {
        if (genCity->parsed())
            return run_gen_city(citySeed, cityClusters, cityArea, cityOut);
        if (simulate->parsed())
            return run_simulate(simulateConfig);
        if (tune->parsed())
            return run_tune(tuneConfig);
        if (solve->parsed())
            return run_solve(solveInstance, solveSeed, solveIterations, solveSeconds);
        if (bench->parsed())
            return run_bench(benchParams);
    }
    catch (const std::exception& error)
    {
        std::fprintf(stderr, "error: %s\n", error.what());
        return kExitConfig;
    }
    return kExitConfig;
}
