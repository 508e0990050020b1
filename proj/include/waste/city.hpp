#pragma once

#include "waste/core.hpp"
#include "waste/demand.hpp"

#include <string>
#include <vector>

namespace waste {

struct Point
{
    double x_km = 0;
    double y_km = 0;
};

// A service area: clusters with deposit rate profiles, a depot, the shift
// rules, and the deposit volume model. The travel matrix lives separately
// (generated from coordinates or loaded from file).
struct City
{
    std::string name;
    double area_km = 0;
    ShiftConfig shift;
    VolumeModel volume;
    Point depot;                      // location 0 in the matrix
    std::vector<Cluster> clusters;    // cluster i has location i + 1
    std::vector<RateFunction> rates;  // aligned with clusters
    std::vector<Point> coords;        // aligned with clusters
};

// Synthetic city on a square of the given side length: cluster positions
// uniform, capacities drawn from {4000, 5000, 6000} litres, hourly rate
// profiles with day and evening peaks scaled so a cluster fills in 2 to 7
// days, central clusters restricted to morning service.
City generate_city(std::uint64_t seed, int numClusters, double areaKm);

// Euclidean distances (ceiled to whole metres) and travel times at 30 km/h.
// Ceiling keeps the triangle inequality exact after integer rounding.
TravelMatrix build_city_matrix(const City& city);

City load_city(const std::string& path);
void save_city(const City& city, const std::string& path);

}  // namespace waste
