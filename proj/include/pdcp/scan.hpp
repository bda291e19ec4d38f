#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pdcp/matrix.hpp"

namespace pdcp {

// Candidate splits A = {t_min, ..., t_max}, a delta fraction away from both
// ends and clamped to [2, n-2] so both segments hold at least two points.
struct CandidateSet {
    double delta = 0.0;
    std::size_t t_min = 0;
    std::size_t t_max = 0;

    static CandidateSet from_delta(std::size_t n, double delta);

    static double default_delta(std::size_t n) { return std::max(0.05, 2.0 / static_cast<double>(n)); }
    static double sqrt_delta(std::size_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); }
};

struct SegmentStats {
    double t11 = 0.0;  // mean pairwise distance within the prefix {Z_1..Z_t}
    double t12 = 0.0;  // mean across prefix/suffix
    double t22 = 0.0;  // mean within the suffix
};

// Direct O(n^2) computation from the matrix; this is the reference the
// incremental scan is checked against. Segments with fewer than two points
// have no pairs and yield 0.
SegmentStats segment_stats(const DistanceMatrix& D, std::size_t t);

// (t(n-t)/n^2) * [ (T12-T11)^2 + (T12-T22)^2 ]
double weighted_divergence(double t11, double t12, double t22, std::size_t t, std::size_t n);

struct ScanResult {
    std::vector<std::pair<std::size_t, double>> curve;  // (t, weighted divergence), t in A
    std::size_t t_hat = 0;                              // smallest maximiser
    double s_hat = 0.0;                                 // max over the curve
    SegmentStats stats_at_t_hat;

    nlohmann::json to_json() const;
    void write_curve_csv(std::ostream& os) const;
};

// Weighted divergence at every candidate split in O(n^2) via incremental
// prefix updates; curve values match segment_stats recomputation.
ScanResult scan(const DistanceMatrix& D, const CandidateSet& cand);

namespace detail {

// Scan under an index relabelling: entry (i,j) is read as D(map[i], map[j]).
// Shared by scan (identity map) and the permutation replicates, which skip
// the curve and track only the maximum.
ScanResult scan_mapped(const DistanceMatrix& D, const CandidateSet& cand,
                       const std::uint32_t* map, bool keep_curve);

}  // namespace detail

}  // namespace pdcp
