#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pdcp/scan.hpp"

namespace pdcp {

struct PermutationConfig {
    std::size_t replicates = 199;  // Monte-Carlo B
    double alpha = 0.05;
    std::uint64_t seed = 0;

    void validate() const;
};

// Scan statistic of the relabelled sequence Z_{perm(1)},...,Z_{perm(n)}.
// Pure index indirection into D; distances are never recomputed.
double permuted_scan(const DistanceMatrix& D, std::span<const std::uint32_t> perm,
                     const CandidateSet& cand);

struct TestOutcome {
    double s_obs = 0.0;
    double p_value = 1.0;             // (1 + #{b : replicate_b >= s_obs}) / (B + 1)
    double cutoff = 0.0;              // ceil((1-alpha)(B+1))-th order statistic
    bool reject = false;              // p_value <= alpha
    std::vector<double> replicates;   // in replicate-index order
};

// Monte-Carlo permutation test of the scan maximum. Replicate b draws its
// permutation from a stream keyed by (seed, b), so results are independent
// of the worker count and bit-identical for a given config.
TestOutcome permutation_test(const DistanceMatrix& D, const CandidateSet& cand,
                             const PermutationConfig& cfg, unsigned threads = 1);

}  // namespace pdcp
