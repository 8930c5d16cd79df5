#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace tridiag {

struct Matching {
    double max_distance = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (index in x, index in y)
};

/// Pairs two equal-size multisets. Greedy nearest neighbour after sorting by
/// real part; groups of points that compete for the same partner are
/// re-solved by optimal assignment. Throws DimensionMismatch on size mismatch.
Matching match_multisets(std::span<const std::complex<double>> x, std::span<const std::complex<double>> y);

/// Minimum-cost perfect assignment on a square cost matrix (row-major).
/// Returns the column assigned to each row.
std::vector<std::size_t> optimal_assignment(std::span<const double> cost, std::size_t size);

}  // namespace tridiag
