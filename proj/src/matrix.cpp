#include "pdcp/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pdcp/parallel.hpp"

namespace pdcp {

void ObservationMatrix::validate_finite() const {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            if (!std::isfinite(at(i, k)))
                throw std::invalid_argument("observations: non-finite value at row " +
                                            std::to_string(i + 1) + ", column " + std::to_string(k + 1));
        }
    }
}

void DistanceMatrix::refresh_sums() {
    row_sums.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += at(i, j);
        row_sums[i] = s;
    }
    double total = 0.0;
    for (double s : row_sums) total += s;
    total_sum = total;
}

DistanceMatrix pairwise_matrix(const ObservationMatrix& data, const DistanceSpec& spec, unsigned threads) {
    if (data.n < 1 || data.d < 1) throw std::invalid_argument("pairwise_matrix: empty observation matrix");
    spec.validate(data.d);
    data.validate_finite();

    const std::size_t n = data.n;
    DistanceMatrix out;
    out.n = n;
    out.dist.assign(n * n, 0.0);

    // row i fills (i,j) and its mirror (j,i) for j > i; rows never overlap
    parallel_for(n, threads, [&](std::size_t i) {
        const double* xi = data.values.data() + i * data.d;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = data.values.data() + j * data.d;
            const double v = detail::eval_distance_unchecked(spec, xi, xj, data.d);
            out.dist[i * n + j] = v;
            out.dist[j * n + i] = v;
        }
    });

    out.refresh_sums();
    return out;
}

}  // namespace pdcp
