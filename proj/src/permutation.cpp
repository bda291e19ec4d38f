#include "pdcp/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pdcp/parallel.hpp"
#include "pdcp/rng.hpp"

namespace pdcp {

namespace {
constexpr std::uint64_t kPermutationTag = rng::fnv1a("permutation-test");
}

void PermutationConfig::validate() const {
    if (replicates < 1) throw std::invalid_argument("permutation: need at least one replicate");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("permutation: alpha must lie in (0,1)");
}

double permuted_scan(const DistanceMatrix& D, std::span<const std::uint32_t> perm,
                     const CandidateSet& cand) {
    const std::size_t n = D.n;
    if (perm.size() != n) throw std::invalid_argument("permuted_scan: permutation length mismatch");
    std::vector<bool> seen(n, false);
    for (std::uint32_t p : perm) {
        if (p >= n || seen[p]) throw std::invalid_argument("permuted_scan: not a permutation of 1..n");
        seen[p] = true;
    }
    return detail::scan_mapped(D, cand, perm.data(), false).s_hat;
}

TestOutcome permutation_test(const DistanceMatrix& D, const CandidateSet& cand,
                             const PermutationConfig& cfg, unsigned threads) {
    cfg.validate();
    const std::size_t n = D.n;
    const std::size_t B = cfg.replicates;

    std::vector<std::uint32_t> identity(n);
    std::iota(identity.begin(), identity.end(), 0u);

    TestOutcome out;
    out.s_obs = detail::scan_mapped(D, cand, identity.data(), false).s_hat;
    out.replicates.assign(B, 0.0);

    parallel_for(B, threads, [&](std::size_t b) {
        rng::Stream stream(cfg.seed, {kPermutationTag, static_cast<std::uint64_t>(b)});
        std::vector<std::uint32_t> perm(identity);
        stream.shuffle(perm);
        out.replicates[b] = detail::scan_mapped(D, cand, perm.data(), false).s_hat;
    });

    std::size_t at_least = 0;
    for (double r : out.replicates)
        if (r >= out.s_obs) ++at_least;
    out.p_value = static_cast<double>(1 + at_least) / static_cast<double>(B + 1);
    out.reject = out.p_value <= cfg.alpha;

    // diagnostic cutoff; the decision above is made on the p-value
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil((1.0 - cfg.alpha) * static_cast<double>(B + 1)));
    if (rank >= 1 && rank <= B) {
        std::vector<double> sorted(out.replicates);
        std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
        out.cutoff = sorted[rank - 1];
    } else {
        out.cutoff = std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace pdcp
