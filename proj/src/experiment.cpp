#include "waste/experiment.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace waste {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

void check_keys(const json& object, std::initializer_list<const char*> allowed,
                const std::string& where)
{
    for (auto const& [key, value] : object.items())
    {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* name) { return key == name; })
            == allowed.end())
            throw std::runtime_error("unknown key '" + key + "' in " + where);
    }
}

std::string trimmed_double(double value)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", value);
    return buf;
}

std::string csv_double(double value)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

PolicyConfig parse_policy(const json& node)
{
    check_keys(node, {"name", "top_n", "epsilon", "rho_km", "sensor", "estimate"}, "policy");
    PolicyConfig policy;
    std::string name = node.at("name").get<std::string>();
    if (name == "baseline")
        policy.kind = PolicyConfig::Kind::Baseline;
    else if (name == "isr")
        policy.kind = PolicyConfig::Kind::Isr;
    else
        throw std::runtime_error("unknown policy name '" + name + "'");

    policy.top_n = node.value("top_n", policy.top_n);
    policy.epsilon = node.value("epsilon", policy.epsilon);
    policy.rho_km = node.value("rho_km", policy.rho_km);
    policy.sensor = node.value("sensor", policy.sensor);
    std::string estimate = node.value("estimate", std::string("unconstrained"));
    if (estimate == "conservative")
        policy.estimate_mode = EstimateMode::Conservative;
    else if (estimate == "unconstrained")
        policy.estimate_mode = EstimateMode::Unconstrained;
    else
        throw std::runtime_error("unknown estimate mode '" + estimate + "'");
    return policy;
}

std::string scenario_label(const PolicyConfig& policy, int fleet)
{
    return policy_label(policy) + "_v" + std::to_string(fleet);
}

void write_measures_header(std::ofstream& out)
{
    out << "scenario,policy,fleet,seed,avg_daily_distance_km,avg_route_duration_h,"
           "avg_routes_per_day,avg_clusters_per_day,service_level_pct,avg_fill_level_pct,"
           "avg_overflow_volume_l,unserviced_count,deposited_l,collected_l,overflow_l,"
           "remaining_l,solver_failures,window_violations,config_hash\n";
}

void write_measures_row(std::ofstream& out, const CellResult& cell, const std::string& seedText,
                        const std::string& hash)
{
    auto const& m = cell.measures;
    out << cell.scenario << ',' << cell.policy << ',' << cell.fleet << ',' << seedText << ','
        << csv_double(m.avg_daily_distance_km) << ',' << csv_double(m.avg_route_duration_h) << ','
        << csv_double(m.avg_routes_per_day) << ',' << csv_double(m.avg_clusters_per_day) << ','
        << csv_double(m.service_level_pct) << ',' << csv_double(m.avg_fill_level_pct) << ','
        << csv_double(m.avg_overflow_volume_l) << ',' << m.unserviced_count << ','
        << csv_double(cell.totals.deposited_l) << ',' << csv_double(cell.totals.collected_l)
        << ',' << csv_double(cell.totals.overflow_l) << ','
        << csv_double(cell.totals.remaining_l) << ',' << cell.solver_failures << ','
        << cell.window_violations << ',' << hash << '\n';
}

CellResult mean_of(const std::vector<CellResult>& cells, std::size_t from, std::size_t count)
{
    CellResult mean = cells[from];
    mean.seed = 0;
    auto add = [&](auto get) {
        double total = 0;
        for (std::size_t i = from; i < from + count; ++i)
            total += get(cells[i]);
        return total / static_cast<double>(count);
    };
    mean.measures.avg_daily_distance_km = add([](auto const& c) { return c.measures.avg_daily_distance_km; });
    mean.measures.avg_route_duration_h = add([](auto const& c) { return c.measures.avg_route_duration_h; });
    mean.measures.avg_routes_per_day = add([](auto const& c) { return c.measures.avg_routes_per_day; });
    mean.measures.avg_clusters_per_day = add([](auto const& c) { return c.measures.avg_clusters_per_day; });
    mean.measures.service_level_pct = add([](auto const& c) { return c.measures.service_level_pct; });
    mean.measures.avg_fill_level_pct = add([](auto const& c) { return c.measures.avg_fill_level_pct; });
    mean.measures.avg_overflow_volume_l = add([](auto const& c) { return c.measures.avg_overflow_volume_l; });
    mean.measures.unserviced_count = static_cast<int>(
        std::lround(add([](auto const& c) { return double(c.measures.unserviced_count); })));
    mean.totals.deposited_l = add([](auto const& c) { return c.totals.deposited_l; });
    mean.totals.collected_l = add([](auto const& c) { return c.totals.collected_l; });
    mean.totals.overflow_l = add([](auto const& c) { return c.totals.overflow_l; });
    mean.totals.remaining_l = add([](auto const& c) { return c.totals.remaining_l; });
    mean.solver_failures = static_cast<int>(
        std::lround(add([](auto const& c) { return double(c.solver_failures); })));
    mean.window_violations = static_cast<int>(
        std::lround(add([](auto const& c) { return double(c.window_violations); })));
    return mean;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config: " + path);

    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::exception& error)
    {
        throw std::runtime_error(path + ": " + error.what());
    }

    try
    {
        check_keys(doc,
                   {"city", "horizon_days", "warmup_days", "seeds", "fleets", "solver",
                    "policies", "tune", "output_dir", "emit_event_log", "prize_floor_m"},
                   "config");

        ExperimentConfig config;
        auto base = fs::path(path).parent_path();
        auto resolve = [&](const std::string& file) {
            fs::path p(file);
            return p.is_absolute() ? p.string() : (base / p).string();
        };

        auto const& city = doc.at("city");
        if (city.contains("generate"))
        {
            check_keys(city, {"generate"}, "city");
            auto const& gen = city.at("generate");
            check_keys(gen, {"seed", "clusters", "area_km"}, "city.generate");
            config.city.generate = true;
            config.city.seed = gen.value("seed", config.city.seed);
            config.city.clusters = gen.value("clusters", config.city.clusters);
            config.city.area_km = gen.value("area_km", config.city.area_km);
        }
        else
        {
            check_keys(city, {"file", "matrix"}, "city");
            config.city.generate = false;
            config.city.city_file = resolve(city.at("file").get<std::string>());
            if (city.contains("matrix"))
                config.city.matrix_file = resolve(city.at("matrix").get<std::string>());
        }

        config.horizon_days = doc.value("horizon_days", config.horizon_days);
        config.warmup_days = doc.value("warmup_days", config.warmup_days);
        if (config.warmup_days >= config.horizon_days || config.horizon_days < 1)
            throw std::runtime_error("warm-up must end before the horizon");

        if (doc.contains("seeds"))
            config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
        if (config.seeds.empty())
            throw std::runtime_error("at least one seed is required");
        if (doc.contains("fleets"))
            config.fleets = doc.at("fleets").get<std::vector<int>>();

        if (doc.contains("solver"))
        {
            auto const& solver = doc.at("solver");
            check_keys(solver, {"iterations", "seconds"}, "solver");
            config.solver.max_iterations = solver.value("iterations", config.solver.max_iterations);
            config.solver.max_seconds = solver.value("seconds", config.solver.max_seconds);
        }

        if (doc.contains("policies"))
            for (auto const& node : doc.at("policies"))
                config.policies.push_back(parse_policy(node));

        if (doc.contains("tune"))
        {
            auto const& tune = doc.at("tune");
            check_keys(tune, {"epsilons", "rhos"}, "tune");
            config.tune_epsilons = tune.at("epsilons").get<std::vector<double>>();
            config.tune_rhos = tune.at("rhos").get<std::vector<double>>();
        }

        config.output_dir = doc.value("output_dir", config.output_dir);
        config.output_dir = resolve(config.output_dir);
        config.emit_event_log = doc.value("emit_event_log", config.emit_event_log);
        config.prize_floor_m = doc.value("prize_floor_m", config.prize_floor_m);

        if (!config.city.generate && !fs::exists(config.city.city_file))
            throw std::runtime_error("city file does not exist: " + config.city.city_file);
        if (!config.city.matrix_file.empty() && !fs::exists(config.city.matrix_file))
            throw std::runtime_error("matrix file does not exist: " + config.city.matrix_file);
        return config;
    }
    catch (const json::exception& error)
    {
        throw std::runtime_error(path + ": " + error.what());
    }
}

std::string config_hash(const ExperimentConfig& config)
{
    std::string text;
    auto add = [&](const std::string& part) {
        text += part;
        text += ';';
    };
    if (config.city.generate)
        add("gen:" + std::to_string(config.city.seed) + ":"
            + std::to_string(config.city.clusters) + ":" + trimmed_double(config.city.area_km));
    else
        add("file:" + config.city.city_file + ":" + config.city.matrix_file);
    add(std::to_string(config.horizon_days));
    add(std::to_string(config.warmup_days));
    for (auto seed : config.seeds)
        add(std::to_string(seed));
    for (auto fleet : config.fleets)
        add(std::to_string(fleet));
    add(std::to_string(config.solver.max_iterations));
    add(trimmed_double(config.solver.max_seconds));
    for (auto const& policy : config.policies)
        add(policy_label(policy) + ":" + std::to_string(policy.top_n) + ":"
            + trimmed_double(policy.epsilon) + ":" + trimmed_double(policy.rho_km));
    for (auto eps : config.tune_epsilons)
        add(trimmed_double(eps));
    for (auto rho : config.tune_rhos)
        add(trimmed_double(rho));
    add(trimmed_double(config.prize_floor_m));

    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char byte : text)
    {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string policy_label(const PolicyConfig& policy)
{
    std::string label;
    if (policy.kind == PolicyConfig::Kind::Baseline)
        label = "baseline_top" + std::to_string(policy.top_n);
    else
        label = "isr_eps" + trimmed_double(policy.epsilon) + "_rho" + trimmed_double(policy.rho_km);
    if (policy.sensor)
        label += "_sensor";
    return label;
}

ResolvedCity resolve_city(const CitySource& source)
{
    ResolvedCity resolved;
    if (source.generate)
        resolved.city = generate_city(source.seed, source.clusters, source.area_km);
    else
        resolved.city = load_city(source.city_file);

    if (!source.generate && !source.matrix_file.empty())
        resolved.matrix = std::make_shared<TravelMatrix>(load_matrix(source.matrix_file));
    else
        resolved.matrix = std::make_shared<TravelMatrix>(build_city_matrix(resolved.city));
    return resolved;
}

SimulateOutput cmd_simulate(const ExperimentConfig& config)
{
    if (config.policies.empty())
        throw std::runtime_error("no policies configured");

    auto resolved = resolve_city(config.city);
    auto hash = config_hash(config);
    fs::create_directories(config.output_dir);

    std::vector<int> fleets = config.fleets;
    if (fleets.empty())
        fleets = {resolved.city.shift.num_vehicles};

    struct Cell
    {
        PolicyConfig policy;
        int fleet;
        std::uint64_t seed;
        std::string scenario;
    };
    std::vector<Cell> cells;
    for (auto const& policy : config.policies)
        for (int fleet : fleets)
            for (auto seed : config.seeds)
                cells.push_back({policy, fleet, seed, scenario_label(policy, fleet)});

    std::vector<SimResult> results(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(cells.size()); ++i)
    {
        City city = resolved.city;
        city.shift.num_vehicles = cells[i].fleet;
        SimConfig sim;
        sim.horizon_days = config.horizon_days;
        sim.warmup_days = config.warmup_days;
        sim.seed = cells[i].seed;
        sim.solver = config.solver;
        sim.prize_floor_m = config.prize_floor_m;
        sim.record_deposit_events = config.emit_event_log;
        results[i] = run_simulation(city, resolved.matrix, cells[i].policy, sim);
    }

    SimulateOutput output;
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        CellResult cell;
        cell.scenario = cells[i].scenario;
        cell.policy = policy_label(cells[i].policy);
        cell.fleet = cells[i].fleet;
        cell.seed = cells[i].seed;
        cell.measures = results[i].measures;
        cell.totals = results[i].totals;
        cell.solver_failures = results[i].solver_failures;
        cell.window_violations = results[i].window_violations;
        output.cells.push_back(cell);

        if (config.emit_event_log)
            save_event_log(results[i].log,
                           (fs::path(config.output_dir)
                            / ("events_" + cell.scenario + "_s" + std::to_string(cell.seed)
                               + ".csv"))
                               .string());
    }

    auto perScenario = config.seeds.size();
    for (std::size_t from = 0; from < output.cells.size(); from += perScenario)
        output.means.push_back(mean_of(output.cells, from, perScenario));

    output.measures_path = (fs::path(config.output_dir) / "measures.csv").string();
    std::ofstream out(output.measures_path);
    if (!out)
        throw std::runtime_error("cannot write " + output.measures_path);
    write_measures_header(out);
    for (auto const& cell : output.cells)
        write_measures_row(out, cell, std::to_string(cell.seed), hash);
    for (auto const& mean : output.means)
        write_measures_row(out, mean, "mean", hash);
    return output;
}

TuneOutput cmd_tune(const ExperimentConfig& config)
{
    if (config.tune_epsilons.empty() || config.tune_rhos.empty())
        throw std::runtime_error("tune requires non-empty epsilon and rho grids");

    auto resolved = resolve_city(config.city);
    auto hash = config_hash(config);
    fs::create_directories(config.output_dir);

    PolicyConfig base;
    for (auto const& policy : config.policies)
        if (policy.kind == PolicyConfig::Kind::Isr)
        {
            base = policy;
            break;
        }

    TuneOutput output;
    output.epsilons = config.tune_epsilons;
    output.rhos = config.tune_rhos;
    auto rows = output.epsilons.size();
    auto cols = output.rhos.size();
    output.distance_km.assign(rows, std::vector<double>(cols, 0));
    output.service_level.assign(rows, std::vector<double>(cols, 0));

    std::vector<SimResult> results(rows * cols);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(rows * cols); ++i)
    {
        PolicyConfig policy = base;
        policy.kind = PolicyConfig::Kind::Isr;
        policy.epsilon = output.epsilons[i / cols];
        policy.rho_km = output.rhos[i % cols];

        SimConfig sim;
        sim.horizon_days = config.horizon_days;
        sim.warmup_days = config.warmup_days;
        sim.seed = config.seeds.front();
        sim.solver = config.solver;
        sim.prize_floor_m = config.prize_floor_m;

        City city = resolved.city;
        results[i] = run_simulation(city, resolved.matrix, policy, sim);
    }

    for (std::size_t e = 0; e < rows; ++e)
        for (std::size_t r = 0; r < cols; ++r)
        {
            output.distance_km[e][r] = results[e * cols + r].measures.avg_daily_distance_km;
            output.service_level[e][r] = results[e * cols + r].measures.service_level_pct;
        }

    auto write_matrix = [&](const std::string& name,
                            const std::vector<std::vector<double>>& matrix) {
        auto path = (fs::path(config.output_dir) / name).string();
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write " + path);
        out << "epsilon";
        for (double rho : output.rhos)
            out << ",rho_" << trimmed_double(rho);
        out << '\n';
        for (std::size_t e = 0; e < rows; ++e)
        {
            out << trimmed_double(output.epsilons[e]);
            for (std::size_t r = 0; r < cols; ++r)
                out << ',' << csv_double(matrix[e][r]);
            out << '\n';
        }
        return path;
    };
    output.distance_path = write_matrix("tune_distance.csv", output.distance_km);
    output.service_path = write_matrix("tune_service.csv", output.service_level);

    auto cellsPath = (fs::path(config.output_dir) / "tune_cells.csv").string();
    std::ofstream cells(cellsPath);
    cells << "epsilon,rho_km,avg_daily_distance_km,service_level_pct,config_hash\n";
    for (std::size_t e = 0; e < rows; ++e)
        for (std::size_t r = 0; r < cols; ++r)
            cells << trimmed_double(output.epsilons[e]) << ',' << trimmed_double(output.rhos[r])
                  << ',' << csv_double(output.distance_km[e][r]) << ','
                  << csv_double(output.service_level[e][r]) << ',' << hash << '\n';
    return output;
}

BenchOutput cmd_bench(const BenchParams& params)
{
    if (params.instance_files.empty())
        throw std::runtime_error("no benchmark instances given");
    if (params.seeds.empty())
        throw std::runtime_error("at least one seed is required");

    std::map<std::string, double> bks;
    if (!params.bks_file.empty())
        bks = load_bks(params.bks_file);

    fs::create_directories(params.output_dir);
    BenchOutput output;

    for (auto const& file : params.instance_files)
    {
        auto instance = parse_solomon(file);
        generate_prizes(instance, params.prize_seed);
        auto routing = to_routing_instance(instance);

        for (auto seed : params.seeds)
        {
            SolveParams solve;
            solve.seed = seed;
            solve.max_iterations = params.max_iterations;
            solve.max_seconds = params.max_seconds;
            auto report = solve_hgs(routing, solve);

            BenchRow row;
            row.instance = instance.name;
            row.group = benchmark_group(instance.name);
            row.seed = seed;
            row.cost = report.eval.cost() / kBenchmarkScale;
            row.initial_cost = report.initial_best_cost / kBenchmarkScale;
            row.feasible = report.eval.feasible;
            auto it = bks.find(instance.name);
            if (it != bks.end() && it->second > 0)
            {
                row.has_bks = true;
                row.gap_pct = (row.cost - it->second) / it->second * 100;
            }
            output.rows.push_back(row);
        }
    }

    output.rows_path = (fs::path(params.output_dir) / "bench.csv").string();
    std::ofstream out(output.rows_path);
    if (!out)
        throw std::runtime_error("cannot write " + output.rows_path);
    out << "instance,group,seed,cost,initial_cost,feasible,gap_pct\n";
    for (auto const& row : output.rows)
    {
        out << row.instance << ',' << row.group << ',' << row.seed << ','
            << csv_double(row.cost) << ',' << csv_double(row.initial_cost) << ','
            << (row.feasible ? 1 : 0) << ',';
        if (row.has_bks)
            out << csv_double(row.gap_pct);
        out << '\n';
    }

    std::map<std::string, std::pair<double, int>> groups;
    for (auto const& row : output.rows)
        if (row.has_bks)
        {
            groups[row.group].first += row.gap_pct;
            groups[row.group].second += 1;
        }
    output.groups_path = (fs::path(params.output_dir) / "bench_groups.csv").string();
    std::ofstream groupOut(output.groups_path);
    groupOut << "group,mean_gap_pct,runs\n";
    for (auto const& [group, sum] : groups)
        groupOut << group << ',' << csv_double(sum.first / sum.second) << ',' << sum.second
                 << '\n';
    return output;
}

}  // namespace waste
