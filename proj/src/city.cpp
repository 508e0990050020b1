#include "waste/city.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace waste {

namespace {

// Hour-of-day weights with a late-morning and an early-evening peak.
constexpr std::array<double, 24> kRateShape = {
    0.2, 0.1, 0.1, 0.1, 0.1, 0.2, 0.5, 0.8, 1.2, 1.5, 1.5, 1.3,
    1.2, 1.0, 1.0, 1.1, 1.3, 1.8, 2.0, 1.8, 1.2, 0.8, 0.5, 0.3,
};

ShiftConfig default_shift()
{
    ShiftConfig shift;
    shift.start = parse_clock("07:00");
    shift.max_duration = 7 * kSecondsPerHour;
    shift.num_vehicles = 4;
    shift.depot_location = 0;
    shift.breaks = {{parse_clock("10:00"), parse_clock("10:30"), 30 * kSecondsPerMinute},
                    {parse_clock("12:00"), parse_clock("12:30"), 30 * kSecondsPerMinute}};
    return shift;
}

}  // namespace

City generate_city(std::uint64_t seed, int numClusters, double areaKm)
{
    if (numClusters < 1 || areaKm <= 0)
        throw std::invalid_argument("generate_city: need clusters >= 1 and a positive area");

    City city;
    city.name = "synthetic-" + std::to_string(seed) + "-" + std::to_string(numClusters);
    city.area_km = areaKm;
    city.shift = default_shift();
    city.volume = VolumeModel::triangular(10, 30, 60);
    // The vehicle yard sits at the edge of town, not among the clusters.
    city.depot = {0.9 * areaKm, 0.1 * areaKm};

    double shapeTotal = 0;
    for (double w : kRateShape)
        shapeTotal += w;

    Rng rng(mix_seed(seed, 0x5ee9c17aULL));

    // Clusters gather in neighbourhood blobs rather than spreading uniformly.
    int numDistricts = std::clamp(numClusters / 12, 3, 12);
    std::vector<Point> districtCentre;
    std::vector<double> districtWeight;
    double weightTotal = 0;
    for (int d = 0; d < numDistricts; ++d)
    {
        districtCentre.push_back({rng.uniform(0.12 * areaKm, 0.88 * areaKm),
                                  rng.uniform(0.12 * areaKm, 0.88 * areaKm)});
        districtWeight.push_back(rng.uniform(0.5, 1.5));
        weightTotal += districtWeight.back();
    }
    double blobSigma = areaKm / 30;

    for (int i = 0; i < numClusters; ++i)
    {
        double pick = rng.uniform(0, weightTotal);
        int district = 0;
        while (district + 1 < numDistricts && pick > districtWeight[district])
        {
            pick -= districtWeight[district];
            ++district;
        }

        Point pos{districtCentre[district].x_km + blobSigma * rng.normal(),
                  districtCentre[district].y_km + blobSigma * rng.normal()};
        pos.x_km = std::clamp(pos.x_km, 0.0, areaKm);
        pos.y_km = std::clamp(pos.y_km, 0.0, areaKm);

        Cluster cluster;
        cluster.id = i;
        cluster.location = i + 1;
        double containerDraw = rng.uniform();
        cluster.num_containers = containerDraw < 0.75 ? 1 : containerDraw < 0.95 ? 2 : 3;
        cluster.capacity = 1000.0 * static_cast<double>(rng.uniform_int(4, 6));
        // Operators keep a safety margin against deposit volume variability.
        cluster.correction_factor = 0.9;
        cluster.earliest_service = city.shift.start;
        cluster.latest_service = city.shift.start + city.shift.max_duration;

        // Clusters near the centre may only be serviced in the morning.
        double dx = pos.x_km - areaKm / 2;
        double dy = pos.y_km - areaKm / 2;
        if (std::sqrt(dx * dx + dy * dy) <= areaKm / 8)
            cluster.latest_service = parse_clock("12:00");

        // Fill times lean towards a week, with a tail of busier clusters.
        double fillDays = 2.0 + 5.0 * std::sqrt(rng.uniform(0.0, 1.0));
        double dailyDeposits = cluster.capacity / city.volume.mean() / fillDays;

        RateFunction rate;
        for (int h = 0; h < 24; ++h)
            rate.per_hour[h] = dailyDeposits * kRateShape[h] / shapeTotal;

        city.clusters.push_back(cluster);
        city.rates.push_back(rate);
        city.coords.push_back(pos);
    }
    return city;
}

TravelMatrix build_city_matrix(const City& city)
{
    std::vector<Point> points;
    points.push_back(city.depot);
    points.insert(points.end(), city.coords.begin(), city.coords.end());

    auto n = static_cast<int>(points.size());
    TravelMatrix matrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
        {
            if (i == j)
                continue;
            double dx = (points[i].x_km - points[j].x_km) * 1000.0;
            double dy = (points[i].y_km - points[j].y_km) * 1000.0;
            auto metres = static_cast<std::int64_t>(std::ceil(std::sqrt(dx * dx + dy * dy)));
            auto seconds = (3 * metres + 24) / 25;  // ceil at 30 km/h
            matrix.set(i, j, metres, seconds);
        }
    return matrix;
}

namespace {

using nlohmann::json;

}  // namespace

void save_city(const City& city, const std::string& path)
{
    json doc;
    doc["name"] = city.name;
    doc["area_km"] = city.area_km;
    doc["volume"] = {{"family", city.volume.family == VolumeModel::Family::Constant ? "constant" : "triangular"},
                     {"lo", city.volume.lo},
                     {"mode", city.volume.mode},
                     {"hi", city.volume.hi}};

    json breaks = json::array();
    for (auto const& b : city.shift.breaks)
        breaks.push_back({{"earliest", format_clock(b.earliest)},
                          {"latest", format_clock(b.latest)},
                          {"minutes", b.duration / kSecondsPerMinute}});
    doc["shift"] = {{"start", format_clock(city.shift.start)},
                    {"max_minutes", city.shift.max_duration / kSecondsPerMinute},
                    {"vehicles", city.shift.num_vehicles},
                    {"depot_location", city.shift.depot_location},
                    {"breaks", breaks}};
    doc["depot"] = {{"x_km", city.depot.x_km}, {"y_km", city.depot.y_km}};

    json clusters = json::array();
    for (std::size_t i = 0; i < city.clusters.size(); ++i)
    {
        auto const& c = city.clusters[i];
        clusters.push_back({{"id", c.id},
                            {"containers", c.num_containers},
                            {"capacity_l", c.capacity},
                            {"correction", c.correction_factor},
                            {"location", c.location},
                            {"x_km", city.coords[i].x_km},
                            {"y_km", city.coords[i].y_km},
                            {"earliest", format_clock(c.earliest_service)},
                            {"latest", format_clock(c.latest_service)},
                            {"rates_per_hour", city.rates[i].per_hour}});
    }
    doc["clusters"] = clusters;

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write city '" + path + "'");
    out << doc.dump(2) << "\n";
}

City load_city(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open city '" + path + "'");

    json doc;
    try
    {
        in >> doc;
    }
    catch (json::exception const& e)
    {
        throw std::runtime_error("city '" + path + "': " + e.what());
    }

    City city;
    city.name = doc.at("name").get<std::string>();
    city.area_km = doc.value("area_km", 0.0);

    auto const& vol = doc.at("volume");
    auto family = vol.at("family").get<std::string>();
    if (family == "constant")
        city.volume = VolumeModel::constant(vol.at("lo").get<double>());
    else if (family == "triangular")
        city.volume = VolumeModel::triangular(vol.at("lo").get<double>(),
                                              vol.at("mode").get<double>(),
                                              vol.at("hi").get<double>());
    else
        throw std::runtime_error("city '" + path + "': unknown volume family '" + family + "'");

    auto const& shiftDoc = doc.at("shift");
    city.shift.start = parse_clock(shiftDoc.at("start").get<std::string>());
    city.shift.max_duration = shiftDoc.at("max_minutes").get<Seconds>() * kSecondsPerMinute;
    city.shift.num_vehicles = shiftDoc.at("vehicles").get<int>();
    city.shift.depot_location = shiftDoc.at("depot_location").get<int>();
    for (auto const& b : shiftDoc.at("breaks"))
        city.shift.breaks.push_back({parse_clock(b.at("earliest").get<std::string>()),
                                     parse_clock(b.at("latest").get<std::string>()),
                                     b.at("minutes").get<Seconds>() * kSecondsPerMinute});

    city.depot = {doc.at("depot").at("x_km").get<double>(), doc.at("depot").at("y_km").get<double>()};

    for (auto const& c : doc.at("clusters"))
    {
        Cluster cluster;
        cluster.id = c.at("id").get<int>();
        cluster.num_containers = c.at("containers").get<int>();
        cluster.capacity = c.at("capacity_l").get<double>();
        cluster.correction_factor = c.at("correction").get<double>();
        cluster.location = c.at("location").get<int>();
        cluster.earliest_service = parse_clock(c.at("earliest").get<std::string>());
        cluster.latest_service = parse_clock(c.at("latest").get<std::string>());

        RateFunction rate;
        auto rateDoc = c.at("rates_per_hour");
        if (rateDoc.size() != 24)
            throw std::runtime_error("city '" + path + "': rates_per_hour needs 24 entries");
        for (int h = 0; h < 24; ++h)
            rate.per_hour[h] = rateDoc[h].get<double>();

        city.clusters.push_back(cluster);
        city.rates.push_back(rate);
        city.coords.push_back({c.value("x_km", 0.0), c.value("y_km", 0.0)});
    }
    return city;
}

}  // namespace waste
