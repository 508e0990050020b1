#pragma once

// Shared fixtures for the test binaries: tiny hand-built travel data, a
// random-instance generator for solver oracle comparisons, and a synthetic
// benchmark file writer in the Solomon column layout.

#include "waste/city.hpp"
#include "waste/core.hpp"
#include "waste/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace testutil {

// Euclidean distances over explicit points, ceiled to metres, timed at
// 30 km/h. Mirrors the city matrix construction.
inline std::shared_ptr<waste::TravelMatrix> matrix_from_points(
    const std::vector<waste::Point>& points)
{
    auto n = static_cast<int>(points.size());
    auto matrix = std::make_shared<waste::TravelMatrix>(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
        {
            if (i == j)
                continue;
            double dx = (points[i].x_km - points[j].x_km) * 1000;
            double dy = (points[i].y_km - points[j].y_km) * 1000;
            auto metres = static_cast<std::int64_t>(std::ceil(std::hypot(dx, dy)));
            matrix->set(i, j, metres, (3 * metres + 24) / 25);
        }
    return matrix;
}

inline waste::Cluster make_cluster(int id, int location, waste::Seconds earliest,
                                   waste::Seconds latest, int containers = 1)
{
    waste::Cluster cluster;
    cluster.id = id;
    cluster.location = location;
    cluster.num_containers = containers;
    cluster.capacity = 4000;
    cluster.earliest_service = earliest;
    cluster.latest_service = latest;
    return cluster;
}

// Random solver instance on a 10 km square: 2..maxClusters clusters, mixed
// full-day and narrow service windows, about a quarter required, one
// mid-morning break a third of the time.
inline waste::RoutingInstance random_instance(waste::Rng& rng, int maxClusters, int vehicles)
{
    using namespace waste;

    int count = static_cast<int>(rng.uniform_int(2, maxClusters));

    ShiftConfig shift;
    shift.start = parse_clock("07:00");
    shift.max_duration = 7 * kSecondsPerHour;
    shift.num_vehicles = vehicles;
    shift.depot_location = 0;
    if (rng.uniform() < 1.0 / 3)
        shift.breaks.push_back(
            {parse_clock("10:00"), parse_clock("10:30"), 30 * kSecondsPerMinute});

    std::vector<Point> points{{5, 5}};
    std::vector<Cluster> clusters;
    std::vector<Prize> prizes;
    Seconds shiftEnd = shift.start + shift.max_duration;
    for (int i = 0; i < count; ++i)
    {
        points.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});

        Cluster cluster = make_cluster(i, i + 1, 0, kSecondsPerDay,
                                       static_cast<int>(rng.uniform_int(1, 5)));
        if (rng.uniform() < 0.5)
        {
            cluster.earliest_service = shift.start + rng.uniform_int(0, 4 * kSecondsPerHour);
            Seconds width = rng.uniform_int(kSecondsPerHour, 3 * kSecondsPerHour);
            cluster.latest_service = std::min(cluster.earliest_service + width, shiftEnd);
        }
        clusters.push_back(cluster);

        Prize prize;
        prize.required = rng.uniform() < 0.25;
        prize.value = prize.required ? 0.0 : rng.uniform(100.0, 8000.0);
        prizes.push_back(prize);
    }

    return build_routing_instance(clusters, prizes, shift, matrix_from_points(points));
}

// Synthetic benchmark file in the Solomon column layout. Client 0 is the
// depot; roughly one client in nineteen gets a demand below 10 so the prize
// floor sees action. Deterministic in the seed.
inline void write_benchmark_fixture(const std::string& path, int numClients,
                                    std::uint64_t seed = 4242, int vehicles = 250,
                                    int capacity = 200)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write fixture: " + path);

    out << "synthetic\n\nVEHICLE\nNUMBER     CAPACITY\n";
    out << "  " << vehicles << "        " << capacity << "\n\n";
    out << "CUSTOMER\n";
    out << "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME   DUE DATE   SERVICE TIME\n\n";

    char buf[160];
    std::snprintf(buf, sizeof(buf), "%5d %9d %9d %9d %9d %9d %9d\n", 0, 500, 500, 0, 0, 10000, 0);
    out << buf;

    waste::Rng rng(waste::mix_seed(seed, 0xf1c7u));
    for (int i = 1; i <= numClients; ++i)
    {
        int x = static_cast<int>(rng.uniform_int(0, 1000));
        int y = static_cast<int>(rng.uniform_int(0, 1000));
        int demand = i % 19 == 0 ? static_cast<int>(rng.uniform_int(0, 9))
                                 : static_cast<int>(rng.uniform_int(10, 50));
        int ready = static_cast<int>(rng.uniform_int(0, 8000));
        int width = static_cast<int>(rng.uniform_int(500, 3000));
        int due = std::min(ready + width, 9000);
        std::snprintf(buf, sizeof(buf), "%5d %9d %9d %9d %9d %9d %9d\n", i, x, y, demand, ready,
                      due, 90);
        out << buf;
    }
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
