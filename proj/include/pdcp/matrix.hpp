#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdcp/distance.hpp"

namespace pdcp {

// n time-ordered observations Z_1..Z_n as rows of an n x d matrix.
struct ObservationMatrix {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> values;  // row-major, n*d entries

    ObservationMatrix() = default;
    ObservationMatrix(std::size_t n_, std::size_t d_) : n(n_), d(d_), values(n_ * d_, 0.0) {}

    std::span<const double> row(std::size_t i) const { return {values.data() + i * d, d}; }
    double& at(std::size_t i, std::size_t k) { return values[i * d + k]; }
    double at(std::size_t i, std::size_t k) const { return values[i * d + k]; }

    // Throws naming the first non-finite cell.
    void validate_finite() const;
};

// Cache of all pairwise phi values plus the row sums that drive the
// incremental scans.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> dist;      // n*n, symmetric, zero diagonal
    std::vector<double> row_sums;  // row_sums[i] = sum_j dist[i][j]
    double total_sum = 0.0;        // sum of all entries (twice the pair sum)

    double at(std::size_t i, std::size_t j) const { return dist[i * n + j]; }

    // Rebuilds row_sums and total_sum from dist; used after direct edits.
    void refresh_sums();
};

// dist[i][j] = eval_distance(spec, Z_i, Z_j) for all pairs. Inputs are
// validated once; rows are filled concurrently.
DistanceMatrix pairwise_matrix(const ObservationMatrix& data, const DistanceSpec& spec,
                               unsigned threads = 1);

}  // namespace pdcp
