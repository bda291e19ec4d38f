#include "pdcp/multi.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "pdcp/parallel.hpp"
#include "pdcp/rng.hpp"

namespace pdcp {

namespace {
constexpr std::uint64_t kMultiTag = rng::fnv1a("conditional-permutation");
}

void MultiConfig::validate() const {
    if (min_seg < 2) throw std::invalid_argument("multi: min_seg must be >= 2");
    if (replicates < 1) throw std::invalid_argument("multi: need at least one replicate");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("multi: alpha must lie in (0,1)");
}

namespace detail {

SplitCandidate best_split_mapped(const DistanceMatrix& D, const std::uint32_t* map,
                                 std::size_t m, std::size_t min_seg) {
    const std::size_t n = D.n;

    // pair sums inside each local prefix: s11[t] = sum_{i<j<t} d(i,j)
    std::vector<long double> s11(m + 1, 0.0L);
    std::vector<long double> pref(m, 0.0L);  // pref[j] = sum_{i<t} d(i,j), grows with t
    for (std::size_t t = 1; t <= m; ++t) {
        const std::size_t r = t - 1;
        s11[t] = s11[t - 1] + pref[r];
        const double* row = D.dist.data() + static_cast<std::size_t>(map[r]) * n;
        for (std::size_t j = r + 1; j < m; ++j) pref[j] += row[map[j]];
    }

    SplitCandidate best;
    bool have_best = false;

    std::fill(pref.begin(), pref.end(), 0.0L);
    for (std::size_t t = 1; t + min_seg <= m; ++t) {
        const double* row = D.dist.data() + static_cast<std::size_t>(map[t - 1]) * n;
        for (std::size_t j = t; j < m; ++j) pref[j] += row[map[j]];
        if (t < min_seg) continue;

        const double tt = static_cast<double>(t);
        const double prefix_pairs = 0.5 * tt * (tt - 1.0);
        long double cross = 0.0L;
        for (std::size_t s = t + 1; s <= m; ++s) {
            cross += pref[s - 1];
            if (s - t < min_seg) continue;

            const double st = static_cast<double>(s - t);
            const double t11 = static_cast<double>(s11[t] / prefix_pairs);
            const double t22 = static_cast<double>((s11[s] - s11[t] - cross) / (0.5 * st * (st - 1.0)));
            const double t12 = static_cast<double>(cross / (tt * st));
            const double a = t12 - t11;
            const double b = t12 - t22;
            const double score = tt * st / static_cast<double>(s) * (a * a + b * b);
            if (!have_best || score > best.score) {
                have_best = true;
                best.score = score;
                best.t = t;
                best.s = s;
            }
        }
    }
    if (!have_best) throw std::invalid_argument("best_split: segment too short for min_seg");
    return best;
}

}  // namespace detail

SplitCandidate best_split(const DistanceMatrix& D, Segment seg, std::size_t min_seg) {
    if (seg.lo < 1 || seg.hi > D.n || seg.lo > seg.hi)
        throw std::invalid_argument("best_split: segment out of range");
    if (seg.length() < 2 * min_seg) throw std::invalid_argument("best_split: segment too short");
    std::vector<std::uint32_t> map(seg.length());
    std::iota(map.begin(), map.end(), static_cast<std::uint32_t>(seg.lo - 1));
    SplitCandidate local = detail::best_split_mapped(D, map.data(), map.size(), min_seg);
    local.t += seg.lo - 1;
    local.s += seg.lo - 1;
    return local;
}

namespace {

struct MultiRun {
    const DistanceMatrix& D;
    const MultiConfig& cfg;
    unsigned threads;
    DetectionReport report;

    void recurse(Segment seg, std::size_t depth) {
        const std::size_t m = seg.length();
        const bool depth_capped = cfg.max_depth > 0 && depth >= cfg.max_depth;
        if (m < 2 * cfg.min_seg || depth_capped) {
            report.segments.push_back(seg);
            return;
        }

        const SplitCandidate observed = best_split(D, seg, cfg.min_seg);

        // permute within the segment only; replicate statistic mirrors the
        // observed best-split score
        std::vector<double> replicates(cfg.replicates, 0.0);
        parallel_for(cfg.replicates, threads, [&](std::size_t b) {
            rng::Stream stream(cfg.seed, {kMultiTag, seg.lo, seg.hi, static_cast<std::uint64_t>(b)});
            std::vector<std::uint32_t> map(m);
            std::iota(map.begin(), map.end(), static_cast<std::uint32_t>(seg.lo - 1));
            stream.shuffle(map);
            replicates[b] = detail::best_split_mapped(D, map.data(), m, cfg.min_seg).score;
        });

        std::size_t at_least = 0;
        for (double r : replicates)
            if (r >= observed.score) ++at_least;
        const double p = static_cast<double>(1 + at_least) / static_cast<double>(cfg.replicates + 1);
        const bool reject = p <= cfg.alpha;

        report.splits.push_back({seg, observed.t, observed.s, observed.score, p, reject, depth});
        if (!reject) {
            report.segments.push_back(seg);
            return;
        }
        report.change_points.push_back({observed.t, p, depth});
        recurse({seg.lo, observed.t}, depth + 1);
        recurse({observed.t + 1, seg.hi}, depth + 1);
    }
};

}  // namespace

DetectionReport detect_multiple(const ObservationMatrix& data, const DistanceSpec& spec,
                                const MultiConfig& cfg, unsigned threads) {
    cfg.validate();
    if (data.n < 2 * cfg.min_seg)
        throw std::invalid_argument("detect_multiple: need at least 2*min_seg observations");

    const DistanceMatrix D = pairwise_matrix(data, spec, threads);
    MultiRun run{D, cfg, threads, {}};
    run.report.config = cfg;
    run.recurse({1, data.n}, 0);

    std::sort(run.report.change_points.begin(), run.report.change_points.end(),
              [](const ChangePoint& a, const ChangePoint& b) { return a.location < b.location; });
    return run.report;
}

}  // namespace pdcp
