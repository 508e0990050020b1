#pragma once

#include "waste/clock.hpp"
#include "waste/travel.hpp"

#include <memory>
#include <string>
#include <vector>

namespace waste {

// One underground container cluster.
struct Cluster
{
    int id = 0;
    int num_containers = 1;
    double capacity = 0;             // litres
    double correction_factor = 1.0;  // deposit count correction used by the rule-based policy
    int location = 0;                // index into the travel matrix
    Seconds earliest_service = 0;    // service window, seconds of day
    Seconds latest_service = 0;
};

// Emptying takes a fixed setup plus one minute per container.
int service_duration_minutes(const Cluster& cluster);

struct BreakSpec
{
    Seconds earliest = 0;  // seconds of day
    Seconds latest = 0;    // latest allowed start
    Seconds duration = 0;
};

struct ShiftConfig
{
    Seconds start = 7 * kSecondsPerHour;
    Seconds max_duration = 7 * kSecondsPerHour;
    int num_vehicles = 4;
    int depot_location = 0;
    std::vector<BreakSpec> breaks;  // in chronological order
};

// Visit incentive for one cluster. A required cluster must be visited; the
// value is the cost (in metres, the matrix distance unit) of leaving an
// optional cluster unvisited.
struct Prize
{
    double value = 0;
    bool required = false;
};

enum class NodeKind
{
    Depot,
    Break,
    Cluster,
};

// Self-contained input to the route solver. Node 0 is the origin depot,
// node 1 the destination depot, then one node per driver break, then one per
// cluster. All times are seconds relative to shift start.
struct RoutingInstance
{
    struct Node
    {
        NodeKind kind = NodeKind::Cluster;
        int location = 0;
        Seconds service = 0;  // service or break duration
        Seconds early = 0;    // window on start of service
        Seconds late = 0;
        int cluster_slot = -1;  // index into prizes/cluster_ids, -1 for depot/breaks
    };

    std::vector<Node> nodes;
    std::vector<Prize> prizes;       // one per cluster slot
    std::vector<int> cluster_ids;    // external cluster id per slot
    std::vector<double> demands;     // per slot; empty when capacity is unused
    double vehicle_capacity = 0;     // 0 disables the capacity check
    int num_vehicles = 1;
    std::shared_ptr<const TravelMatrix> matrix;
    Seconds shift_start = 0;  // seconds of day, for reporting
    Seconds horizon = 0;      // max shift duration

    int num_breaks() const { return static_cast<int>(nodes.size()) - 2 - num_clusters(); }
    int num_clusters() const { return static_cast<int>(prizes.size()); }
    int first_cluster_node() const { return static_cast<int>(nodes.size()) - num_clusters(); }
    int cluster_node(int slot) const { return first_cluster_node() + slot; }

    std::int64_t dist(int from, int to) const
    {
        return matrix->distance(nodes[from].location, nodes[to].location);
    }

    std::int64_t dur(int from, int to) const
    {
        return matrix->duration(nodes[from].location, nodes[to].location);
    }
};

// Builds a solver instance for one shift. Cluster windows are clipped to the
// shift and must remain non-empty; prizes align with clusters by position.
RoutingInstance build_routing_instance(const std::vector<Cluster>& clusters,
                                       const std::vector<Prize>& prizes,
                                       const ShiftConfig& shift,
                                       std::shared_ptr<const TravelMatrix> matrix);

// JSON persistence for instances; the travel matrix lives in a companion file
// referenced by (relative) path.
RoutingInstance load_instance(const std::string& path);
void save_instance(const RoutingInstance& instance, const std::string& path,
                   const std::string& matrixFile);

}  // namespace waste
