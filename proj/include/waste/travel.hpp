#pragma once

#include "waste/clock.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace waste {

// Point-to-point travel data over locations. Distances are integer metres,
// durations integer seconds. Loaded matrices may be asymmetric and need not
// satisfy the triangle inequality; nothing downstream may assume either.
struct TravelMatrix
{
    int n = 0;
    std::vector<std::int64_t> dist;  // row-major, metres
    std::vector<std::int64_t> dur;   // row-major, seconds

    TravelMatrix() = default;
    explicit TravelMatrix(int size) : n(size), dist(size * std::size_t(size)), dur(size * std::size_t(size)) {}

    std::int64_t distance(int from, int to) const { return dist[from * std::size_t(n) + to]; }
    std::int64_t duration(int from, int to) const { return dur[from * std::size_t(n) + to]; }

    void set(int from, int to, std::int64_t metres, std::int64_t seconds)
    {
        dist[from * std::size_t(n) + to] = metres;
        dur[from * std::size_t(n) + to] = seconds;
    }
};

// Text format: first token is the location count n, followed by n*n distance
// entries (metres) and n*n duration entries (seconds), whitespace-separated
// integers. Rejects malformed input, negative entries, and nonzero diagonals.
TravelMatrix load_matrix(const std::string& path);
void save_matrix(const TravelMatrix& matrix, const std::string& path);

}  // namespace waste
