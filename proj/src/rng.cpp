#include "waste/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace waste {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t state = seed;
    splitmix64(state);
    state ^= stream;
    return splitmix64(state);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2)
{
    return mix_seed(mix_seed(seed, s1), s2);
}

double Rng::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (lo > hi)
        throw std::invalid_argument("uniform_int: empty range");

    auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0)  // full 64-bit range
        return static_cast<std::int64_t>(next_u64());

    // Rejection sampling to stay unbiased.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw;
    do
        draw = next_u64();
    while (draw >= limit);

    return lo + static_cast<std::int64_t>(draw % range);
}

double Rng::normal()
{
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

std::int64_t Rng::poisson(double mean)
{
    if (mean < 0)
        throw std::invalid_argument("poisson: negative mean");

    std::int64_t total = 0;
    while (mean > 500.0)  // chunk so exp(-mean) stays representable
    {
        mean -= 500.0;
        total += poisson(500.0);
    }

    double threshold = std::exp(-mean);
    double product = uniform();
    std::int64_t count = 0;
    while (product > threshold)
    {
        ++count;
        product *= uniform();
    }
    return total + count;
}

double Rng::triangular(double lo, double mode, double hi)
{
    if (!(lo <= mode && mode <= hi))
        throw std::invalid_argument("triangular: need lo <= mode <= hi");
    if (lo == hi)
        return lo;

    double u = uniform();
    double cut = (mode - lo) / (hi - lo);
    if (u < cut)
        return lo + std::sqrt(u * (hi - lo) * (mode - lo));
    return hi - std::sqrt((1 - u) * (hi - lo) * (hi - mode));
}

}  // namespace waste
