#include "waste/benchmark_io.hpp"

#include "waste/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace waste {

namespace {

bool is_number(const std::string& token)
{
    if (token.empty())
        return false;
    char* end = nullptr;
    std::strtod(token.c_str(), &end);
    return end == token.c_str() + token.size();
}

}  // namespace

BenchmarkInstance parse_solomon(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open instance: " + path);

    BenchmarkInstance instance;
    instance.name = std::filesystem::path(path).stem().string();

    // Tokenize the whole file; the layout is line-oriented but all values of
    // interest are numeric runs after the VEHICLE and CUSTOMER keywords.
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token)
        tokens.push_back(token);

    auto find = [&](const std::string& keyword) {
        auto it = std::find(tokens.begin(), tokens.end(), keyword);
        if (it == tokens.end())
            throw std::runtime_error(path + ": missing " + keyword + " section");
        return it;
    };

    auto vehicle = find("VEHICLE");
    std::vector<double> vehicleNumbers;
    for (auto it = vehicle + 1; it != tokens.end() && vehicleNumbers.size() < 2; ++it)
        if (is_number(*it))
            vehicleNumbers.push_back(std::stod(*it));
    if (vehicleNumbers.size() < 2)
        throw std::runtime_error(path + ": malformed VEHICLE section");
    instance.num_vehicles = static_cast<int>(vehicleNumbers[0]);
    instance.capacity = vehicleNumbers[1];
    if (instance.num_vehicles < 1 || instance.capacity <= 0)
        throw std::runtime_error(path + ": invalid vehicle count or capacity");

    auto customer = find("CUSTOMER");
    std::vector<double> numbers;
    for (auto it = customer + 1; it != tokens.end(); ++it)
        if (is_number(*it))
            numbers.push_back(std::stod(*it));
    if (numbers.empty() || numbers.size() % 7 != 0)
        throw std::runtime_error(path + ": customer rows must have 7 columns");

    for (std::size_t row = 0; row * 7 < numbers.size(); ++row)
    {
        const double* f = numbers.data() + row * 7;
        BenchmarkClient client{static_cast<int>(f[0]), f[1], f[2], f[3], f[4], f[5], f[6]};
        if (client.ready > client.due || client.demand < 0 || client.service < 0)
            throw std::runtime_error(path + ": invalid customer row "
                                     + std::to_string(client.id));
        if (row == 0)
            instance.depot = client;
        else
            instance.clients.push_back(client);
    }
    if (instance.depot.demand != 0)
        throw std::runtime_error(path + ": depot must have zero demand");
    return instance;
}

void generate_prizes(BenchmarkInstance& instance, std::uint64_t seed)
{
    Rng rng(mix_seed(seed, 0x70e1a3u));
    for (auto& client : instance.clients)
        client.prize = std::max(rng.uniform(0.75, 2.25) * client.demand, 1.0);
}

RoutingInstance to_routing_instance(const BenchmarkInstance& instance)
{
    auto n = instance.clients.size();

    auto matrix = std::make_shared<TravelMatrix>();
    matrix->n = static_cast<int>(n) + 1;
    matrix->dist.assign(matrix->n * std::size_t(matrix->n), 0);
    matrix->dur.assign(matrix->n * std::size_t(matrix->n), 0);
    auto coord = [&](std::size_t i) -> std::pair<double, double> {
        if (i == 0)
            return {instance.depot.x, instance.depot.y};
        return {instance.clients[i - 1].x, instance.clients[i - 1].y};
    };
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j)
        {
            if (i == j)
                continue;
            auto [xi, yi] = coord(i);
            auto [xj, yj] = coord(j);
            auto d = static_cast<std::int64_t>(
                std::floor(kBenchmarkScale * std::hypot(xi - xj, yi - yj)));
            matrix->set(static_cast<int>(i), static_cast<int>(j), d, d);
        }

    RoutingInstance inst;
    inst.matrix = matrix;
    inst.num_vehicles = instance.num_vehicles;
    inst.vehicle_capacity = instance.capacity;
    inst.shift_start = 0;
    inst.horizon = static_cast<Seconds>(std::llround(kBenchmarkScale * instance.depot.due));

    RoutingInstance::Node depot;
    depot.kind = NodeKind::Depot;
    depot.location = 0;
    depot.early = static_cast<Seconds>(std::llround(kBenchmarkScale * instance.depot.ready));
    depot.late = inst.horizon;
    inst.nodes.push_back(depot);
    inst.nodes.push_back(depot);

    for (std::size_t i = 0; i < n; ++i)
    {
        auto const& client = instance.clients[i];
        RoutingInstance::Node node;
        node.kind = NodeKind::Cluster;
        node.location = static_cast<int>(i) + 1;
        node.service = static_cast<Seconds>(std::llround(kBenchmarkScale * client.service));
        node.early = static_cast<Seconds>(std::llround(kBenchmarkScale * client.ready));
        node.late = static_cast<Seconds>(std::llround(kBenchmarkScale * client.due));
        node.cluster_slot = static_cast<int>(i);
        inst.nodes.push_back(node);

        inst.prizes.push_back({kBenchmarkScale * client.prize, false});
        inst.cluster_ids.push_back(client.id);
        inst.demands.push_back(client.demand);
    }
    return inst;
}

std::map<std::string, double> load_bks(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open BKS table: " + path);

    std::map<std::string, double> table;
    std::string line;
    bool first = true;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ": expected 'instance,cost' rows");
        std::string name = line.substr(0, comma);
        if (first && name == "instance")
        {
            first = false;
            continue;
        }
        first = false;
        table[name] = std::stod(line.substr(comma + 1));
    }
    return table;
}

std::string benchmark_group(const std::string& name)
{
    std::string letters;
    std::size_t i = 0;
    while (i < name.size() && std::isalpha(static_cast<unsigned char>(name[i])))
        letters += static_cast<char>(std::toupper(static_cast<unsigned char>(name[i++])));
    if (i >= name.size() || !std::isdigit(static_cast<unsigned char>(name[i])))
        return "other";
    if (letters != "C" && letters != "R" && letters != "RC")
        return "other";
    return letters + name[i];
}

}  // namespace waste
