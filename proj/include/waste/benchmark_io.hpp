#pragma once

#include "waste/core.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace waste {

struct BenchmarkClient
{
    int id = 0;
    double x = 0;
    double y = 0;
    double demand = 0;
    double ready = 0;  // earliest start of service
    double due = 0;    // latest start of service
    double service = 0;
    double prize = 0;  // same cost units as plain Euclidean distance
};

// A Solomon / Gehring-Homberger style instance: client 0 is the depot.
struct BenchmarkInstance
{
    std::string name;
    int num_vehicles = 0;
    double capacity = 0;
    BenchmarkClient depot;
    std::vector<BenchmarkClient> clients;
};

BenchmarkInstance parse_solomon(const std::string& path);

// Prizes p_i = max(h_i * q_i, 1) with h_i i.i.d. uniform on [0.75, 2.25],
// fixed by the seed.
void generate_prizes(BenchmarkInstance& instance, std::uint64_t seed);

// Routing instance in tenths of a distance unit: distances floor(10 * d),
// durations equal to distances, windows, service times, and prizes scaled by
// 10. Divide solution cost by 10 to report in instance units.
RoutingInstance to_routing_instance(const BenchmarkInstance& instance);

inline constexpr double kBenchmarkScale = 10;

// CSV "instance,cost" with a header line.
std::map<std::string, double> load_bks(const std::string& path);

// Solomon-style group of an instance name: C1, C2, R1, R2, RC1, RC2, or
// "other" when the name fits no group.
std::string benchmark_group(const std::string& name);

}  // namespace waste
