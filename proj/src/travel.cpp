#include "waste/travel.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace waste {

namespace {

std::int64_t next_entry(std::istream& in, const std::string& path)
{
    std::int64_t value;
    if (!(in >> value))
        throw std::runtime_error("travel matrix '" + path + "': expected more integer entries");
    return value;
}

}  // namespace

TravelMatrix load_matrix(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open travel matrix '" + path + "'");

    std::int64_t n = next_entry(in, path);
    if (n <= 0 || n > 100000)
        throw std::runtime_error("travel matrix '" + path + "': invalid location count");

    TravelMatrix matrix(static_cast<int>(n));
    for (auto* block : {&matrix.dist, &matrix.dur})
        for (std::size_t idx = 0; idx < block->size(); ++idx)
        {
            std::int64_t value = next_entry(in, path);
            if (value < 0)
                throw std::runtime_error("travel matrix '" + path + "': negative entry");
            (*block)[idx] = value;
        }

    std::int64_t trailing;
    if (in >> trailing)
        throw std::runtime_error("travel matrix '" + path + "': trailing data after 2*n*n entries");

    for (int i = 0; i < matrix.n; ++i)
        if (matrix.distance(i, i) != 0 || matrix.duration(i, i) != 0)
            throw std::runtime_error("travel matrix '" + path + "': nonzero diagonal");

    return matrix;
}

void save_matrix(const TravelMatrix& matrix, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write travel matrix '" + path + "'");

    out << matrix.n << "\n";
    for (auto* block : {&matrix.dist, &matrix.dur})
        for (int i = 0; i < matrix.n; ++i)
        {
            for (int j = 0; j < matrix.n; ++j)
                out << (*block)[i * std::size_t(matrix.n) + j] << (j + 1 == matrix.n ? "" : " ");
            out << "\n";
        }

    if (!out)
        throw std::runtime_error("failed writing travel matrix '" + path + "'");
}

}  // namespace waste
