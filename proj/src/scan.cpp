#include "pdcp/scan.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pdcp {

CandidateSet CandidateSet::from_delta(std::size_t n, double delta) {
    if (n < 4) throw std::invalid_argument("candidate set: need at least 4 observations");
    if (!(delta > 0.0) || delta > 0.5)
        throw std::invalid_argument("candidate set: delta must lie in (0, 0.5]");
    const double nd = static_cast<double>(n) * delta;
    std::size_t lo = static_cast<std::size_t>(std::floor(nd));
    std::size_t hi = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * (1.0 - delta)));
    if (lo < 2) lo = 2;
    if (hi > n - 2) hi = n - 2;
    if (lo > hi)
        throw std::invalid_argument("candidate set: empty for n=" + std::to_string(n) +
                                    ", delta=" + std::to_string(delta));
    CandidateSet c;
    c.delta = delta;
    c.t_min = lo;
    c.t_max = hi;
    return c;
}

SegmentStats segment_stats(const DistanceMatrix& D, std::size_t t) {
    const std::size_t n = D.n;
    if (t < 1 || t >= n) throw std::invalid_argument("segment_stats: t out of range");

    double within_prefix = 0.0;
    double within_suffix = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = D.at(i, j);
            if (j < t)
                within_prefix += v;
            else if (i >= t)
                within_suffix += v;
            else
                cross += v;
        }
    }
    const double prefix_pairs = 0.5 * static_cast<double>(t) * static_cast<double>(t - 1);
    const double suffix_pairs = 0.5 * static_cast<double>(n - t) * static_cast<double>(n - t - 1);
    SegmentStats s;
    s.t11 = prefix_pairs > 0.0 ? within_prefix / prefix_pairs : 0.0;
    s.t22 = suffix_pairs > 0.0 ? within_suffix / suffix_pairs : 0.0;
    s.t12 = cross / (static_cast<double>(t) * static_cast<double>(n - t));
    return s;
}

double weighted_divergence(double t11, double t12, double t22, std::size_t t, std::size_t n) {
    if (t < 1 || t >= n) throw std::invalid_argument("weighted_divergence: need 0 < t < n");
    const double a = t12 - t11;
    const double b = t12 - t22;
    const double w = static_cast<double>(t) * static_cast<double>(n - t) /
                     (static_cast<double>(n) * static_cast<double>(n));
    return w * (a * a + b * b);
}

namespace detail {

ScanResult scan_mapped(const DistanceMatrix& D, const CandidateSet& cand,
                       const std::uint32_t* map, bool keep_curve) {
    const std::size_t n = D.n;
    if (cand.t_min < 2 || cand.t_max > n - 2 || cand.t_min > cand.t_max)
        throw std::invalid_argument("scan: candidate set inconsistent with matrix size");

    ScanResult res;
    if (keep_curve) res.curve.reserve(cand.t_max - cand.t_min + 1);

    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const double pair_total = 0.5 * D.total_sum;

    // S11 = sum over pairs inside the prefix, S12 = sum over cross pairs;
    // extended precision guards the running subtractions.
    long double s11 = 0.0L;
    long double s12 = D.row_sums[map[0]];

    bool have_best = false;
    for (std::size_t t = 2; t <= cand.t_max; ++t) {
        // bring row t-1 (0-based) into the prefix
        const std::uint32_t r = map[t - 1];
        const double* row = D.dist.data() + static_cast<std::size_t>(r) * n;
        long double prefix_part = 0.0L;
        for (std::size_t i = 0; i + 1 < t; ++i) prefix_part += row[map[i]];
        s11 += prefix_part;
        s12 += static_cast<long double>(D.row_sums[r]) - 2.0L * prefix_part;

        if (t < cand.t_min) continue;

        const long double s22 = static_cast<long double>(pair_total) - s11 - s12;
        const double tt = static_cast<double>(t);
        const double nt = static_cast<double>(n - t);
        SegmentStats stats;
        stats.t11 = static_cast<double>(s11 / (0.5L * tt * (tt - 1.0)));
        stats.t22 = static_cast<double>(s22 / (0.5L * nt * (nt - 1.0)));
        stats.t12 = static_cast<double>(s12 / (tt * nt));

        const double a = stats.t12 - stats.t11;
        const double b = stats.t12 - stats.t22;
        const double value = tt * nt / n2 * (a * a + b * b);

        if (keep_curve) res.curve.emplace_back(t, value);
        if (!have_best || value > res.s_hat) {
            have_best = true;
            res.s_hat = value;
            res.t_hat = t;
            res.stats_at_t_hat = stats;
        }
    }
    return res;
}

}  // namespace detail

ScanResult scan(const DistanceMatrix& D, const CandidateSet& cand) {
    std::vector<std::uint32_t> identity(D.n);
    for (std::size_t i = 0; i < D.n; ++i) identity[i] = static_cast<std::uint32_t>(i);
    return detail::scan_mapped(D, cand, identity.data(), true);
}

nlohmann::json ScanResult::to_json() const {
    nlohmann::json j;
    j["t_hat"] = t_hat;
    j["s_hat"] = s_hat;
    nlohmann::json curve_json = nlohmann::json::array();
    for (const auto& [t, v] : curve) curve_json.push_back({t, v});
    j["curve"] = std::move(curve_json);
    return j;
}

void ScanResult::write_curve_csv(std::ostream& os) const {
    os << "t,weighted_divergence\n";
    for (const auto& [t, v] : curve) {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        os << t << ',';
        os.write(buf, p - buf);
        os << '\n';
    }
}

}  // namespace pdcp
