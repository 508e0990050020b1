#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "waste/city.hpp"
#include "waste/travel.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace waste;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& content)
{
    auto path = (fs::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("matrix text round-trip")
{
    TravelMatrix m(3);
    m.set(0, 1, 1200, 145);
    m.set(1, 0, 1300, 157);
    m.set(0, 2, 800, 97);
    m.set(2, 0, 800, 97);
    m.set(1, 2, 500, 61);
    m.set(2, 1, 450, 55);

    auto dir = fs::temp_directory_path() / "wcp_travel";
    fs::create_directories(dir);
    auto path = (dir / "m.txt").string();
    save_matrix(m, path);
    auto loaded = load_matrix(path);

    CHECK(loaded.n == 3);
    CHECK(loaded.dist == m.dist);
    CHECK(loaded.dur == m.dur);
    CHECK(loaded.distance(1, 0) == 1300);  // asymmetric entries survive
    fs::remove_all(dir);
}

TEST_CASE("matrix loader rejects malformed input")
{
    CHECK_THROWS(load_matrix(write_temp("wcp_m_bad1.txt", "2\n0 1 1 0\n0 1 1")));      // short
    CHECK_THROWS(load_matrix(write_temp("wcp_m_bad2.txt", "2\n0 -5 5 0\n0 1 1 0")));   // negative
    CHECK_THROWS(load_matrix(write_temp("wcp_m_bad3.txt", "2\n0 1 1 0\n0 1 1 0 9")));  // trailing
    CHECK_THROWS(load_matrix(write_temp("wcp_m_bad4.txt", "2\n3 1 1 0\n0 1 1 0")));    // diagonal
    CHECK_THROWS(load_matrix(write_temp("wcp_m_bad5.txt", "0\n")));
    CHECK_THROWS(load_matrix(write_temp("wcp_m_bad6.txt", "2\n0 x 1 0\n0 1 1 0")));
    CHECK_THROWS(load_matrix("/nonexistent/matrix.txt"));

    auto ok = load_matrix(write_temp("wcp_m_ok.txt", "2\n0 7\n9 0\n0 1\n2 0\n"));
    CHECK(ok.distance(0, 1) == 7);
    CHECK(ok.duration(1, 0) == 2);
}

TEST_CASE("generated city is deterministic and within spec")
{
    auto a = generate_city(42, 60, 12.0);
    auto b = generate_city(42, 60, 12.0);

    REQUIRE(a.clusters.size() == 60);
    CHECK(a.name == b.name);
    for (std::size_t i = 0; i < a.clusters.size(); ++i)
    {
        CHECK(a.coords[i].x_km == b.coords[i].x_km);
        CHECK(a.coords[i].y_km == b.coords[i].y_km);
        CHECK(a.clusters[i].capacity == b.clusters[i].capacity);
        CHECK(a.rates[i].per_hour == b.rates[i].per_hour);
    }
    CHECK(generate_city(43, 60, 12.0).coords[0].x_km != a.coords[0].x_km);

    for (std::size_t i = 0; i < a.clusters.size(); ++i)
    {
        auto const& c = a.clusters[i];
        CHECK((c.capacity == 4000 || c.capacity == 5000 || c.capacity == 6000));
        CHECK(c.num_containers >= 1);
        CHECK(c.num_containers <= 3);
        CHECK(c.location == static_cast<int>(i) + 1);
        CHECK(a.coords[i].x_km >= 0);
        CHECK(a.coords[i].x_km <= 12);
        CHECK(a.coords[i].y_km >= 0);
        CHECK(a.coords[i].y_km <= 12);

        // Central clusters take morning-only service windows.
        double dx = a.coords[i].x_km - 6, dy = a.coords[i].y_km - 6;
        if (std::hypot(dx, dy) <= 1.5)
            CHECK(c.latest_service == parse_clock("12:00"));
        else
            CHECK(c.latest_service == parse_clock("14:00"));

        // Rates are sized so a cluster fills in 2 to 7 days at 33.3 L/deposit.
        double fillDays = c.capacity / a.volume.mean() / a.rates[i].daily_total();
        CHECK(fillDays >= 2.0 - 1e-9);
        CHECK(fillDays <= 7.0 + 1e-9);
    }
    CHECK(a.shift.num_vehicles == 4);
    CHECK(a.shift.breaks.size() == 2);
}

TEST_CASE("city matrix: symmetric, triangle inequality, 30 km/h")
{
    auto city = generate_city(7, 25, 10.0);
    auto m = build_city_matrix(city);
    REQUIRE(m.n == 26);

    for (int i = 0; i < m.n; ++i)
    {
        CHECK(m.distance(i, i) == 0);
        for (int j = 0; j < m.n; ++j)
        {
            CHECK(m.distance(i, j) == m.distance(j, i));
            if (i != j)
            {
                CHECK(m.distance(i, j) > 0);
                // Integer seconds at 30 km/h, rounded up.
                CHECK(m.duration(i, j) == (3 * m.distance(i, j) + 24) / 25);
                // Nothing further apart than the square's diagonal.
                CHECK(m.distance(i, j)
                      <= static_cast<std::int64_t>(std::ceil(10000 * std::sqrt(2.0))));
            }
        }
    }

    // Ceiling per leg preserves the triangle inequality.
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j)
            for (int k = 0; k < m.n; k += 5)
                CHECK(m.distance(i, j) <= m.distance(i, k) + m.distance(k, j));
}

TEST_CASE("city save and load round-trip")
{
    auto city = generate_city(11, 8, 9.0);
    city.volume = VolumeModel::constant(30);

    auto dir = fs::temp_directory_path() / "wcp_city_io";
    fs::create_directories(dir);
    auto path = (dir / "city.json").string();
    save_city(city, path);
    auto loaded = load_city(path);

    CHECK(loaded.name == city.name);
    CHECK(loaded.area_km == city.area_km);
    CHECK(loaded.volume.family == VolumeModel::Family::Constant);
    CHECK(loaded.volume.mean() == 30);
    CHECK(loaded.shift.start == city.shift.start);
    CHECK(loaded.shift.breaks.size() == city.shift.breaks.size());
    CHECK(loaded.depot.x_km == city.depot.x_km);
    REQUIRE(loaded.clusters.size() == city.clusters.size());
    for (std::size_t i = 0; i < city.clusters.size(); ++i)
    {
        CHECK(loaded.clusters[i].capacity == city.clusters[i].capacity);
        CHECK(loaded.clusters[i].num_containers == city.clusters[i].num_containers);
        CHECK(loaded.clusters[i].earliest_service == city.clusters[i].earliest_service);
        CHECK(loaded.clusters[i].latest_service == city.clusters[i].latest_service);
        CHECK(loaded.coords[i].x_km == doctest::Approx(city.coords[i].x_km).epsilon(1e-12));
        for (int h = 0; h < 24; ++h)
            CHECK(loaded.rates[i].per_hour[h]
                  == doctest::Approx(city.rates[i].per_hour[h]).epsilon(1e-12));
    }

    save_city(city, (dir / "city2.json").string());
    CHECK(testutil::read_file(path) == testutil::read_file((dir / "city2.json").string()));
    fs::remove_all(dir);
}
