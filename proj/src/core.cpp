#include "waste/core.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace waste {

namespace {

void check(bool condition, const std::string& message)
{
    if (!condition)
        throw std::invalid_argument(message);
}

}  // namespace

int service_duration_minutes(const Cluster& cluster)
{
    check(cluster.num_containers >= 1, "cluster needs at least one container");
    return 2 + cluster.num_containers;
}

RoutingInstance build_routing_instance(const std::vector<Cluster>& clusters,
                                       const std::vector<Prize>& prizes,
                                       const ShiftConfig& shift,
                                       std::shared_ptr<const TravelMatrix> matrix)
{
    check(matrix != nullptr, "instance needs a travel matrix");
    check(prizes.size() == clusters.size(), "one prize per cluster required");
    check(shift.num_vehicles >= 1, "need at least one vehicle");
    check(shift.max_duration > 0, "shift duration must be positive");
    check(shift.depot_location >= 0 && shift.depot_location < matrix->n, "depot location outside matrix");

    RoutingInstance instance;
    instance.matrix = std::move(matrix);
    instance.num_vehicles = shift.num_vehicles;
    instance.shift_start = shift.start;
    instance.horizon = shift.max_duration;

    RoutingInstance::Node depot;
    depot.kind = NodeKind::Depot;
    depot.location = shift.depot_location;
    depot.early = 0;
    depot.late = shift.max_duration;
    instance.nodes.push_back(depot);  // origin
    instance.nodes.push_back(depot);  // destination

    Seconds prevBreak = 0;
    for (auto const& spec : shift.breaks)
    {
        check(spec.duration > 0, "break duration must be positive");
        check(spec.earliest >= prevBreak, "breaks must be in chronological order");
        prevBreak = spec.earliest;

        RoutingInstance::Node node;
        node.kind = NodeKind::Break;
        node.location = shift.depot_location;
        node.service = spec.duration;
        node.early = spec.earliest - shift.start;
        node.late = spec.latest - shift.start;
        check(node.early <= node.late, "break window is empty");
        check(node.late >= 0 && node.early <= shift.max_duration, "break window outside shift");
        node.early = std::max<Seconds>(node.early, 0);
        instance.nodes.push_back(node);
    }

    for (std::size_t i = 0; i < clusters.size(); ++i)
    {
        auto const& cluster = clusters[i];
        check(cluster.capacity > 0, "cluster capacity must be positive");
        check(cluster.location >= 0 && cluster.location < instance.matrix->n,
              "cluster location outside matrix");

        RoutingInstance::Node node;
        node.kind = NodeKind::Cluster;
        node.location = cluster.location;
        node.service = service_duration_minutes(cluster) * kSecondsPerMinute;
        node.early = std::max<Seconds>(cluster.earliest_service - shift.start, 0);
        node.late = std::min<Seconds>(cluster.latest_service - shift.start, shift.max_duration);
        check(node.early <= node.late,
              "cluster " + std::to_string(cluster.id) + " has an empty window within the shift");
        node.cluster_slot = static_cast<int>(i);
        instance.nodes.push_back(node);

        instance.cluster_ids.push_back(cluster.id);
        Prize prize = prizes[i];
        check(prize.value >= 0, "prizes cannot be negative");
        if (prize.required)
            prize.value = 0;
        instance.prizes.push_back(prize);
    }

    return instance;
}

namespace {

using nlohmann::json;

json shift_to_json(const RoutingInstance& instance)
{
    json breaks = json::array();
    for (int b = 0; b < instance.num_breaks(); ++b)
    {
        auto const& node = instance.nodes[2 + b];
        breaks.push_back({{"earliest", format_clock(node.early + instance.shift_start)},
                          {"latest", format_clock(node.late + instance.shift_start)},
                          {"minutes", node.service / kSecondsPerMinute}});
    }
    return {{"start", format_clock(instance.shift_start)},
            {"max_minutes", instance.horizon / kSecondsPerMinute},
            {"vehicles", instance.num_vehicles},
            {"depot_location", instance.nodes[0].location},
            {"breaks", breaks}};
}

}  // namespace

void save_instance(const RoutingInstance& instance, const std::string& path,
                   const std::string& matrixFile)
{
    json doc;
    doc["matrix_file"] = matrixFile;
    doc["shift"] = shift_to_json(instance);
    doc["vehicle_capacity"] = instance.vehicle_capacity;

    json clusters = json::array();
    json prizes = json::array();
    for (int slot = 0; slot < instance.num_clusters(); ++slot)
    {
        auto const& node = instance.nodes[instance.cluster_node(slot)];
        json cluster{{"id", instance.cluster_ids[slot]},
                     {"containers", node.service / kSecondsPerMinute - 2},
                     {"location", node.location},
                     {"earliest", format_clock(node.early + instance.shift_start)},
                     {"latest", format_clock(node.late + instance.shift_start)}};
        if (!instance.demands.empty())
            cluster["demand"] = instance.demands[slot];
        clusters.push_back(cluster);
        prizes.push_back({{"value_m", instance.prizes[slot].value},
                          {"required", instance.prizes[slot].required}});
    }
    doc["clusters"] = clusters;
    doc["prizes"] = prizes;

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write instance '" + path + "'");
    out << doc.dump(2) << "\n";
}

RoutingInstance load_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open instance '" + path + "'");

    json doc;
    try
    {
        in >> doc;
    }
    catch (json::exception const& e)
    {
        throw std::runtime_error("instance '" + path + "': " + e.what());
    }

    auto matrixPath = std::filesystem::path(path).parent_path()
                      / doc.at("matrix_file").get<std::string>();
    auto matrix = std::make_shared<TravelMatrix>(load_matrix(matrixPath.string()));

    auto const& shiftDoc = doc.at("shift");
    ShiftConfig shift;
    shift.start = parse_clock(shiftDoc.at("start").get<std::string>());
    shift.max_duration = shiftDoc.at("max_minutes").get<Seconds>() * kSecondsPerMinute;
    shift.num_vehicles = shiftDoc.at("vehicles").get<int>();
    shift.depot_location = shiftDoc.at("depot_location").get<int>();
    for (auto const& b : shiftDoc.at("breaks"))
        shift.breaks.push_back({parse_clock(b.at("earliest").get<std::string>()),
                                parse_clock(b.at("latest").get<std::string>()),
                                b.at("minutes").get<Seconds>() * kSecondsPerMinute});

    std::vector<Cluster> clusters;
    std::vector<double> demands;
    bool anyDemand = false;
    for (auto const& c : doc.at("clusters"))
    {
        Cluster cluster;
        cluster.id = c.at("id").get<int>();
        cluster.num_containers = c.at("containers").get<int>();
        cluster.capacity = 1;  // capacity is not part of the solver input
        cluster.location = c.at("location").get<int>();
        cluster.earliest_service = parse_clock(c.at("earliest").get<std::string>());
        cluster.latest_service = parse_clock(c.at("latest").get<std::string>());
        clusters.push_back(cluster);
        demands.push_back(c.value("demand", 0.0));
        anyDemand = anyDemand || c.contains("demand");
    }

    std::vector<Prize> prizes;
    for (auto const& p : doc.at("prizes"))
        prizes.push_back({p.at("value_m").get<double>(), p.at("required").get<bool>()});

    auto instance = build_routing_instance(clusters, prizes, shift, matrix);
    instance.vehicle_capacity = doc.value("vehicle_capacity", 0.0);
    if (anyDemand)
        instance.demands = demands;
    return instance;
}

}  // namespace waste
