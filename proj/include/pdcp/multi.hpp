#pragma once

#include <cstdint>
#include <vector>

#include "pdcp/matrix.hpp"
#include "pdcp/scan.hpp"

namespace pdcp {

// Inclusive 1-based observation indices into the original sequence.
struct Segment {
    std::size_t lo = 0;
    std::size_t hi = 0;

    std::size_t length() const { return hi - lo + 1; }
};

struct MultiConfig {
    std::size_t min_seg = 3;       // smallest sub-segment on either side of a split
    std::size_t replicates = 199;  // conditional permutation B
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::size_t max_depth = 0;     // 0 = unlimited

    void validate() const;
};

struct SplitCandidate {
    std::size_t t = 0;   // global index of the proposed change (prefix end)
    std::size_t s = 0;   // global end of the sub-sequence the score was taken on
    double score = 0.0;  // max over feasible (t, s) of (t(s-t)/s) * divergence
};

// Most potential change-point of the segment: maximises, over prefixes of
// Z_lo..Z_s in segment-local coordinates, the weighted divergence
// (t(s-t)/s) * D(Z_{lo:t}, Z_{t+1:s}). Ties break to smallest t, then s.
SplitCandidate best_split(const DistanceMatrix& D, Segment seg, std::size_t min_seg);

struct ChangePoint {
    std::size_t location = 0;
    double p_value = 1.0;
    std::size_t depth = 0;
};

// One conditional significance test performed during the recursion.
struct SplitRecord {
    Segment segment;
    std::size_t t = 0;
    std::size_t s = 0;
    double score = 0.0;
    double p_value = 1.0;
    bool reject = false;
    std::size_t depth = 0;
};

struct DetectionReport {
    std::vector<ChangePoint> change_points;  // strictly increasing locations
    std::vector<Segment> segments;           // final partition of 1..n
    std::vector<SplitRecord> splits;         // every test run, in visit order
    MultiConfig config;
};

// Hierarchical detection: find the best split, test it with a permutation
// test restricted to the segment (replicate statistic is the permuted
// best-split score), recurse on both sides while significant. Deterministic
// given the seed; an empty change-point list is a valid outcome.
DetectionReport detect_multiple(const ObservationMatrix& data, const DistanceSpec& spec,
                                const MultiConfig& cfg, unsigned threads = 1);

namespace detail {

// Segment-local core: observation i of the segment is row map[i] of D.
SplitCandidate best_split_mapped(const DistanceMatrix& D, const std::uint32_t* map,
                                 std::size_t m, std::size_t min_seg);

}  // namespace detail

}  // namespace pdcp
