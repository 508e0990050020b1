#pragma once

#include "waste/benchmark_io.hpp"
#include "waste/simulator.hpp"

#include <string>
#include <vector>

namespace waste {

struct CitySource
{
    bool generate = true;
    std::uint64_t seed = 7;
    int clusters = 100;
    double area_km = 10;
    std::string city_file;    // when generate is false
    std::string matrix_file;  // optional; empty rebuilds from coordinates
};

struct ExperimentConfig
{
    CitySource city;
    int horizon_days = 120;
    int warmup_days = 30;
    std::vector<std::uint64_t> seeds{1};
    std::vector<int> fleets;  // empty keeps the city's vehicle count
    SolveParams solver;       // seed is overridden per cell
    std::vector<PolicyConfig> policies;
    std::vector<double> tune_epsilons;
    std::vector<double> tune_rhos;
    std::string output_dir = "out";
    bool emit_event_log = false;
    double prize_floor_m = 1;
};

// Reads the documented JSON schema; unknown keys are rejected so typos fail
// loudly. Relative file references resolve against the config's directory.
ExperimentConfig load_experiment_config(const std::string& path);

// FNV-1a over the canonical rendering of the config; stamped into reports so
// every output file names the settings that produced it.
std::string config_hash(const ExperimentConfig& config);

std::string policy_label(const PolicyConfig& policy);

struct ResolvedCity
{
    City city;
    std::shared_ptr<const TravelMatrix> matrix;
};

ResolvedCity resolve_city(const CitySource& source);

struct CellResult
{
    std::string scenario;
    std::string policy;
    int fleet = 0;
    std::uint64_t seed = 0;
    MeasureReport measures;
    VolumeTotals totals;
    int solver_failures = 0;
    int window_violations = 0;
};

struct SimulateOutput
{
    std::vector<CellResult> cells;  // scenario-major, then seed
    std::vector<CellResult> means;  // one per scenario, averaged over seeds
    std::string measures_path;
};

// Runs every (policy x fleet x seed) cell and writes measures.csv plus
// per-scenario mean rows. Cells are independent and may run concurrently;
// output order is fixed regardless.
SimulateOutput cmd_simulate(const ExperimentConfig& config);

struct TuneOutput
{
    std::vector<double> epsilons;
    std::vector<double> rhos;
    std::vector<std::vector<double>> distance_km;     // [epsilon][rho]
    std::vector<std::vector<double>> service_level;   // [epsilon][rho]
    std::string distance_path;
    std::string service_path;
};

// One run per (epsilon, rho) pair on the first seed; writes the two matrices
// as CSV heatmaps plus a per-cell row file.
TuneOutput cmd_tune(const ExperimentConfig& config);

struct BenchRow
{
    std::string instance;
    std::string group;
    std::uint64_t seed = 0;
    double cost = 0;          // instance units
    double initial_cost = 0;  // best of the initial population
    bool feasible = false;
    bool has_bks = false;
    double gap_pct = 0;
};

struct BenchParams
{
    std::vector<std::string> instance_files;
    std::string bks_file;  // optional
    std::vector<std::uint64_t> seeds{1};
    std::uint64_t prize_seed = 42;
    int max_iterations = 100000000;
    double max_seconds = 60;  // 0 disables the wall clock
    std::string output_dir = "out";
};

struct BenchOutput
{
    std::vector<BenchRow> rows;
    std::string rows_path;
    std::string groups_path;
};

BenchOutput cmd_bench(const BenchParams& params);

}  // namespace waste
