#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace waste {

// Mixes a base seed with a stream id so that independent components (clusters,
// days, grid cells) get decorrelated, reproducible streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2);

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; all samplers are implemented on top of
// the raw 64-bit stream so results do not depend on the standard library's
// distribution internals.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1).
    double uniform();

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Standard normal via Box-Muller.
    double normal();
    double normal(double mean, double sd);

    // Poisson count. Knuth's product method, chunked so large means stay in
    // range of double exponentials.
    std::int64_t poisson(double mean);

    // Triangular distribution on [lo, hi] with the given mode, by inverse CDF.
    double triangular(double lo, double mode, double hi);

    template <typename T> void shuffle(std::vector<T>& items)
    {
        for (std::size_t i = items.size(); i > 1; --i)
        {
            auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace waste
