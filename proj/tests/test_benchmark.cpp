#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "waste/brute_force.hpp"
#include "waste/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

using namespace waste;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir()
{
    auto dir = fs::temp_directory_path() / "wcp_bench";
    fs::create_directories(dir);
    return dir;
}

std::string write_text(const std::string& name, const std::string& body)
{
    auto path = (temp_dir() / name).string();
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("solomon parser reads the synthetic fixture")
{
    auto path = (temp_dir() / "gh60.txt").string();
    testutil::write_benchmark_fixture(path, 60);

    auto instance = parse_solomon(path);
    CHECK(instance.name == "gh60");
    CHECK(instance.num_vehicles == 250);
    CHECK(instance.capacity == 200.0);
    CHECK(instance.clients.size() == 60);

    CHECK(instance.depot.id == 0);
    CHECK(instance.depot.x == 500.0);
    CHECK(instance.depot.y == 500.0);
    CHECK(instance.depot.demand == 0.0);
    CHECK(instance.depot.ready == 0.0);
    CHECK(instance.depot.due == 10000.0);
    CHECK(instance.depot.service == 0.0);

    for (std::size_t i = 0; i < instance.clients.size(); ++i)
    {
        auto const& client = instance.clients[i];
        CHECK(client.id == static_cast<int>(i) + 1);
        CHECK(client.demand >= 0.0);
        CHECK(client.demand <= 50.0);
        CHECK(client.ready >= 0.0);
        CHECK(client.ready <= client.due);
        CHECK(client.due <= 9000.0);
        CHECK(client.service == 90.0);
        CHECK(client.prize == 0.0);
    }
}

TEST_CASE("solomon parser rejects malformed files")
{
    const std::string vehicle = "VEHICLE\nNUMBER CAPACITY\n25 200\n\n";
    const std::string header = "CUSTOMER\nCUST NO. XCOORD. YCOORD. DEMAND READY DUE SERVICE\n";
    const std::string depot = "0 40 50 0 0 1000 0\n";

    CHECK_THROWS_AS(parse_solomon((temp_dir() / "no_such_file.txt").string()),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_solomon(write_text("no_vehicle.txt", header + depot)),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_solomon(write_text("no_customer.txt", vehicle + depot)),
                    std::runtime_error);
    CHECK_THROWS_AS(
        parse_solomon(write_text("short_row.txt", vehicle + header + "0 40 50 0 0 1000\n")),
        std::runtime_error);
    CHECK_THROWS_AS(parse_solomon(write_text(
                        "window.txt", vehicle + header + depot + "1 10 10 5 900 100 90\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_solomon(write_text(
                        "demand.txt", vehicle + header + depot + "1 10 10 -5 0 1000 90\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_solomon(write_text("depot_demand.txt",
                                             vehicle + header + "0 40 50 3 0 1000 0\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_solomon(write_text("bad_vehicle.txt",
                                             "VEHICLE\nNUMBER CAPACITY\n0 200\n" + header
                                                 + depot)),
                    std::runtime_error);
}

TEST_CASE("prize generation is seeded and scales with demand")
{
    auto path = (temp_dir() / "gh1000.txt").string();
    testutil::write_benchmark_fixture(path, 1000);

    auto a = parse_solomon(path);
    auto b = parse_solomon(path);
    generate_prizes(a, 42);
    generate_prizes(b, 42);
    for (std::size_t i = 0; i < a.clients.size(); ++i)
        CHECK(a.clients[i].prize == b.clients[i].prize);

    auto c = parse_solomon(path);
    generate_prizes(c, 43);
    int differing = 0;
    for (std::size_t i = 0; i < a.clients.size(); ++i)
        if (c.clients[i].prize != a.clients[i].prize)
            ++differing;
    CHECK(differing > 900);

    double ratioSum = 0;
    int ratioCount = 0;
    for (auto const& client : a.clients)
    {
        CHECK(client.prize >= 1.0);
        if (client.demand == 0.0)
            CHECK(client.prize == 1.0);
        if (client.demand >= 10.0)
        {
            double ratio = client.prize / client.demand;
            CHECK(ratio >= 0.75);
            CHECK(ratio <= 2.25);
            ratioSum += ratio;
            ++ratioCount;
        }
    }
    CHECK(ratioCount > 900);
    CHECK(ratioSum / ratioCount == doctest::Approx(1.5).epsilon(0.05 / 1.5));
}

TEST_CASE("benchmark group classification")
{
    CHECK(benchmark_group("C101") == "C1");
    CHECK(benchmark_group("c207") == "C2");
    CHECK(benchmark_group("R105") == "R1");
    CHECK(benchmark_group("rc26") == "RC2");
    CHECK(benchmark_group("RC1_10_1") == "RC1");
    CHECK(benchmark_group("X99") == "other");
    CHECK(benchmark_group("R") == "other");
    CHECK(benchmark_group("123") == "other");
    CHECK(benchmark_group("RD1") == "other");
    CHECK(benchmark_group("") == "other");
}

TEST_CASE("routing conversion scales to tenths")
{
    BenchmarkInstance instance;
    instance.name = "tiny";
    instance.num_vehicles = 2;
    instance.capacity = 30;
    instance.depot = {0, 0, 0, 0, 0, 100, 0, 0};
    instance.clients.push_back({1, 3, 4, 25, 10, 50, 9, 2.5});
    instance.clients.push_back({2, 6, 8, 5, 0, 100, 0, 1.0});

    auto inst = to_routing_instance(instance);
    CHECK(inst.nodes.size() == 4);
    CHECK(inst.num_clusters() == 2);
    CHECK(inst.num_breaks() == 0);
    CHECK(inst.first_cluster_node() == 2);
    CHECK(inst.num_vehicles == 2);
    CHECK(inst.vehicle_capacity == 30.0);
    CHECK(inst.shift_start == 0);
    CHECK(inst.horizon == 1000);

    CHECK(inst.nodes[0].kind == NodeKind::Depot);
    CHECK(inst.nodes[0].early == 0);
    CHECK(inst.nodes[0].late == 1000);

    // Depot to (3,4) is distance 5, stored as 50; durations mirror distances.
    CHECK(inst.dist(0, 2) == 50);
    CHECK(inst.dur(0, 2) == 50);
    CHECK(inst.dist(2, 3) == 50);
    CHECK(inst.dist(0, 3) == 100);

    CHECK(inst.nodes[2].kind == NodeKind::Cluster);
    CHECK(inst.nodes[2].location == 1);
    CHECK(inst.nodes[2].cluster_slot == 0);
    CHECK(inst.nodes[2].early == 100);
    CHECK(inst.nodes[2].late == 500);
    CHECK(inst.nodes[2].service == 90);
    CHECK(inst.nodes[3].service == 0);

    CHECK(inst.prizes[0].value == 25.0);
    CHECK_FALSE(inst.prizes[0].required);
    CHECK(inst.prizes[1].value == 10.0);
    CHECK(inst.demands == std::vector<double>{25.0, 5.0});
    CHECK(inst.cluster_ids == std::vector<int>{1, 2});
}

TEST_CASE("best known solution table")
{
    auto withHeader = write_text("bks1.csv", "instance,cost\nC101,828.94\nR105,1355.3\n");
    auto table = load_bks(withHeader);
    CHECK(table.size() == 2);
    CHECK(table.at("C101") == doctest::Approx(828.94));
    CHECK(table.at("R105") == doctest::Approx(1355.3));

    auto bare = load_bks(write_text("bks2.csv", "C101,828.94\n\nR105,1355.3\n"));
    CHECK(bare.size() == 2);
    CHECK(bare.at("C101") == doctest::Approx(828.94));

    CHECK_THROWS_AS(load_bks(write_text("bks3.csv", "instance,cost\nC101 828.94\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(load_bks((temp_dir() / "absent.csv").string()), std::runtime_error);
}

TEST_CASE("benchmark harness runs, reports, and matches the exhaustive bound")
{
    auto dir = temp_dir();
    auto path = (dir / "mini8.txt").string();
    testutil::write_benchmark_fixture(path, 8, 4242, 3, 200);

    BenchParams params;
    params.instance_files = {path};
    params.seeds = {1, 2};
    params.prize_seed = 42;
    params.max_iterations = 400;
    params.max_seconds = 0;
    params.output_dir = (dir / "bench_out").string();

    auto output = cmd_bench(params);
    REQUIRE(output.rows.size() == 2);

    auto parsed = parse_solomon(path);
    generate_prizes(parsed, params.prize_seed);
    auto exact = brute_force_solve(to_routing_instance(parsed));
    REQUIRE(exact.feasible);

    for (auto const& row : output.rows)
    {
        CHECK(row.instance == "mini8");
        CHECK(row.group == "other");
        CHECK(row.feasible);
        CHECK_FALSE(row.has_bks);
        CHECK(row.cost <= row.initial_cost + 1e-9);
        CHECK(row.cost >= exact.cost / kBenchmarkScale - 1e-6);
    }
    CHECK(output.rows[0].seed == 1);
    CHECK(output.rows[1].seed == 2);

    auto rows = testutil::read_file(output.rows_path);
    CHECK(rows.rfind("instance,group,seed,cost,initial_cost,feasible,gap_pct\n", 0) == 0);
    auto groups = testutil::read_file(output.groups_path);
    CHECK(groups.rfind("group,mean_gap_pct,runs\n", 0) == 0);

    // Feed the observed cost back as the best known solution; an identical
    // rerun must then report a zero gap for that seed.
    char line[64];
    std::snprintf(line, sizeof(line), "mini8,%.17g\n", output.rows[0].cost);
    params.bks_file = write_text("bks_mini.csv", std::string("instance,cost\n") + line);
    auto rerun = cmd_bench(params);
    REQUIRE(rerun.rows.size() == 2);
    CHECK(rerun.rows[0].cost == output.rows[0].cost);
    CHECK(rerun.rows[1].cost == output.rows[1].cost);
    CHECK(rerun.rows[0].has_bks);
    CHECK(rerun.rows[1].has_bks);
    CHECK(rerun.rows[0].gap_pct == 0.0);

    auto rerunGroups = testutil::read_file(rerun.groups_path);
    CHECK(rerunGroups.find("other,") != std::string::npos);
    CHECK(rerunGroups.find(",2\n") != std::string::npos);

    CHECK_THROWS_AS(cmd_bench(BenchParams{}), std::runtime_error);
}
