// Timing harness for the data-parallel kernels: each one has a serial
// reference implementation used by the tests, and an OpenMP version used in
// production. Run this to see whether the parallel path pays off on the
// current machine.

#include "waste/city.hpp"
#include "waste/core.hpp"
#include "waste/neighbourhood.hpp"
#include "waste/simulator.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

namespace {

double time_ms(const std::function<void()>& fn)
{
    auto start = std::chrono::steady_clock::now();
    fn();
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const char* name, double serialMs, double parallelMs)
{
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n", name, serialMs,
                parallelMs, parallelMs > 0 ? serialMs / parallelMs : 0.0);
}

}  // namespace

int main()
{
    const int clusters = 850;
    auto city = waste::generate_city(20240901, clusters, 14.0);
    auto matrix = std::make_shared<waste::TravelMatrix>(waste::build_city_matrix(city));

    std::vector<waste::Prize> prizes(clusters, waste::Prize{1000, false});
    auto instance = waste::build_routing_instance(city.clusters, prizes, city.shift, matrix);

    std::printf("city: %d clusters, %zu routing nodes\n\n", clusters, instance.nodes.size());

    waste::Neighbourhood serialHood, parallelHood;
    double serialMs = time_ms([&] { serialHood = waste::build_neighbourhoods_serial(instance, 40); });
    double parallelMs = time_ms([&] { parallelHood = waste::build_neighbourhoods(instance, 40); });
    if (serialHood.lists != parallelHood.lists)
    {
        std::fprintf(stderr, "neighbourhood mismatch between serial and parallel\n");
        return 1;
    }
    report("build_neighbourhoods", serialMs, parallelMs);

    const int horizonDays = 365;
    std::vector<waste::DepositStream> serialStreams, parallelStreams;
    serialMs = time_ms(
        [&] { serialStreams = waste::generate_deposits_serial(city, horizonDays, 99); });
    parallelMs =
        time_ms([&] { parallelStreams = waste::generate_deposits(city, horizonDays, 99); });
    for (int c = 0; c < clusters; ++c)
        if (serialStreams[c].times != parallelStreams[c].times ||
            serialStreams[c].volumes != parallelStreams[c].volumes)
        {
            std::fprintf(stderr, "deposit stream mismatch at cluster %d\n", c);
            return 1;
        }
    report("generate_deposits", serialMs, parallelMs);
    return 0;
}
