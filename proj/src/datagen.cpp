#include "pdcp/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pdcp/rng.hpp"

namespace pdcp {

namespace {

constexpr std::uint64_t kGaussTag = rng::fnv1a("gaussian");
constexpr std::uint64_t kIidTTag = rng::fnv1a("iid-t");
constexpr std::uint64_t kMvTTag = rng::fnv1a("multivariate-t");
constexpr std::uint64_t kMgsnTag = rng::fnv1a("mgsn");
constexpr std::uint64_t kCubeTag = rng::fnv1a("uniform-cube");
constexpr std::uint64_t kL2BallTag = rng::fnv1a("uniform-l2-ball");
constexpr std::uint64_t kL1BallTag = rng::fnv1a("uniform-l1-ball");
constexpr std::uint64_t kScenarioTag = rng::fnv1a("scenario-segment");

void check_counts(std::size_t n, std::size_t d) {
    if (n < 1 || d < 1) throw std::invalid_argument("datagen: n and d must be >= 1");
}

// draws one N(0, cov) vector into row, then shifts by mu
void fill_gaussian_row(double* row, std::size_t d, const std::vector<double>& mu,
                       const CovSpec& cov, rng::Stream& stream, bool accumulate) {
    double prev = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        double v = 0.0;
        switch (cov.type) {
            case CovSpec::Type::scaled_identity:
                v = std::sqrt(cov.scale) * stream.normal();
                break;
            case CovSpec::Type::diagonal:
                v = std::sqrt(cov.diag[k]) * stream.normal();
                break;
            case CovSpec::Type::ar1: {
                const double e = stream.normal();
                v = k == 0 ? e : cov.rho * prev + std::sqrt(1.0 - cov.rho * cov.rho) * e;
                prev = v;
                break;
            }
        }
        if (!mu.empty()) v += mu[k];
        if (accumulate)
            row[k] += v;
        else
            row[k] = v;
    }
}

}  // namespace

CovSpec CovSpec::identity(double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("cov: scale must be positive");
    CovSpec c;
    c.type = Type::scaled_identity;
    c.scale = sigma2;
    return c;
}

CovSpec CovSpec::diagonal(std::vector<double> variances) {
    for (double v : variances)
        if (!(v > 0.0)) throw std::invalid_argument("cov: diagonal entries must be positive");
    CovSpec c;
    c.type = Type::diagonal;
    c.diag = std::move(variances);
    return c;
}

CovSpec CovSpec::ar1(double rho) {
    if (!(std::fabs(rho) < 1.0)) throw std::invalid_argument("cov: ar1 needs |rho| < 1");
    CovSpec c;
    c.type = Type::ar1;
    c.rho = rho;
    return c;
}

void CovSpec::validate(std::size_t d) const {
    if (type == Type::diagonal && diag.size() != d)
        throw std::invalid_argument("cov: diagonal length must equal the dimension");
}

ObservationMatrix gaussian(std::size_t n, std::size_t d, const std::vector<double>& mu,
                           const CovSpec& cov, std::uint64_t seed) {
    check_counts(n, d);
    cov.validate(d);
    if (!mu.empty() && mu.size() != d)
        throw std::invalid_argument("gaussian: mean length must equal the dimension");
    ObservationMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream stream(seed, {kGaussTag, i});
        fill_gaussian_row(out.values.data() + i * d, d, mu, cov, stream, false);
    }
    return out;
}

ObservationMatrix iid_t(std::size_t n, std::size_t d, double df, std::uint64_t seed) {
    check_counts(n, d);
    if (!(df > 0.0)) throw std::invalid_argument("iid_t: df must be positive");
    ObservationMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream stream(seed, {kIidTTag, i});
        for (std::size_t k = 0; k < d; ++k) out.at(i, k) = stream.student_t(df);
    }
    return out;
}

ObservationMatrix multivariate_t(std::size_t n, std::size_t d, double df, std::uint64_t seed) {
    check_counts(n, d);
    if (!(df > 0.0)) throw std::invalid_argument("multivariate_t: df must be positive");
    ObservationMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream stream(seed, {kMvTTag, i});
        const double w = stream.chi_squared(df);
        const double factor = std::sqrt(df / w);
        for (std::size_t k = 0; k < d; ++k) out.at(i, k) = factor * stream.normal();
    }
    return out;
}

ObservationMatrix mgsn(std::size_t n, std::size_t d, double p, const std::vector<double>& mu,
                       const CovSpec& cov, std::uint64_t seed) {
    check_counts(n, d);
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("mgsn: p must lie in (0,1]");
    cov.validate(d);
    if (!mu.empty() && mu.size() != d)
        throw std::invalid_argument("mgsn: mean length must equal the dimension");
    // N == 1 almost surely: the geometric sum collapses to a single draw
    if (p == 1.0) return gaussian(n, d, mu, cov, seed);
    ObservationMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream stream(seed, {kMgsnTag, i});
        const std::uint64_t count = stream.geometric_count(p);
        double* row = out.values.data() + i * d;
        for (std::uint64_t c = 0; c < count; ++c) fill_gaussian_row(row, d, mu, cov, stream, c > 0);
    }
    return out;
}

ObservationMatrix uniform_cube(std::size_t n, std::size_t d, double half_width, std::uint64_t seed) {
    check_counts(n, d);
    if (!(half_width > 0.0)) throw std::invalid_argument("uniform_cube: half_width must be positive");
    ObservationMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream stream(seed, {kCubeTag, i});
        for (std::size_t k = 0; k < d; ++k) out.at(i, k) = half_width * (2.0 * stream.uniform01() - 1.0);
    }
    return out;
}

RadiusMode RadiusMode::explicit_radius(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    RadiusMode m;
    m.kind = Kind::explicit_radius;
    m.radius = r;
    return m;
}

double l2_ball_radius_matching_cube(std::size_t d) {
    // solve pi^{d/2} r^d / Gamma(d/2+1) = 2^d
    const double dd = static_cast<double>(d);
    return 2.0 * std::exp(std::lgamma(dd / 2.0 + 1.0) / dd) / std::sqrt(M_PI);
}

double l1_ball_radius_matching_cube(std::size_t d) {
    // solve 2^d r^d / d! = 2^d
    const double dd = static_cast<double>(d);
    return std::exp(std::lgamma(dd + 1.0) / dd);
}

ObservationMatrix uniform_l2_ball(std::size_t n, std::size_t d, RadiusMode mode, std::uint64_t seed) {
    check_counts(n, d);
    const double r =
        mode.kind == RadiusMode::Kind::explicit_radius ? mode.radius : l2_ball_radius_matching_cube(d);
    ObservationMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream stream(seed, {kL2BallTag, i});
        double* row = out.values.data() + i * d;
        double norm_sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            row[k] = stream.normal();
            norm_sq += row[k] * row[k];
        }
        const double scale =
            r * std::pow(stream.uniform_pos(), 1.0 / static_cast<double>(d)) / std::sqrt(norm_sq);
        for (std::size_t k = 0; k < d; ++k) row[k] *= scale;
    }
    return out;
}

ObservationMatrix uniform_l1_ball(std::size_t n, std::size_t d, RadiusMode mode, std::uint64_t seed) {
    check_counts(n, d);
    const double r =
        mode.kind == RadiusMode::Kind::explicit_radius ? mode.radius : l1_ball_radius_matching_cube(d);
    ObservationMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Stream stream(seed, {kL1BallTag, i});
        double* row = out.values.data() + i * d;
        double sum = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            row[k] = stream.exponential();
            sum += row[k];
        }
        const double scale = r * std::pow(stream.uniform_pos(), 1.0 / static_cast<double>(d)) / sum;
        for (std::size_t k = 0; k < d; ++k) {
            const bool negative = (stream.u64() & 1u) != 0;
            row[k] *= negative ? -scale : scale;
        }
    }
    return out;
}

std::size_t sparse_count(std::size_t d, double beta) {
    if (!(beta > 0.0) || !(beta < 1.0)) throw std::invalid_argument("sparse_count: beta must lie in (0,1)");
    const double value = std::exp2(beta * std::log2(static_cast<double>(d)));
    auto count = static_cast<std::size_t>(std::floor(value));
    return count > d ? d : count;
}

namespace {

std::vector<std::size_t> segment_lengths(std::size_t n, const std::vector<std::size_t>& taus) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (taus[i] < 1 || taus[i] >= n)
            throw std::invalid_argument("scenario: change-points must satisfy 0 < tau < n");
        if (i > 0 && taus[i] <= taus[i - 1])
            throw std::invalid_argument("scenario: change-points must be strictly increasing");
    }
    std::vector<std::size_t> lengths;
    std::size_t prev = 0;
    for (std::size_t tau : taus) {
        lengths.push_back(tau - prev);
        prev = tau;
    }
    lengths.push_back(n - prev);
    return lengths;
}

// assembles the scenario from per-segment generator closures, giving each
// segment an independent sub-seed so composition order cannot perturb draws
template <typename MakeSegment>
ObservationMatrix assemble(std::size_t n, std::size_t d, const std::vector<std::size_t>& taus,
                           std::uint64_t seed, int example_id, MakeSegment&& make_segment) {
    const std::vector<std::size_t> lengths = segment_lengths(n, taus);
    ObservationMatrix out(n, d);
    std::size_t row = 0;
    for (std::size_t s = 0; s < lengths.size(); ++s) {
        const std::uint64_t sub_seed =
            rng::derive_seed(seed, {kScenarioTag, static_cast<std::uint64_t>(example_id), s});
        const ObservationMatrix part = make_segment(s, lengths[s], sub_seed);
        std::copy(part.values.begin(), part.values.end(), out.values.begin() + row * d);
        row += lengths[s];
    }
    return out;
}

std::vector<double> constant_mu(std::size_t d, double value) { return std::vector<double>(d, value); }

std::vector<double> half_half(std::size_t d, double first, double second) {
    std::vector<double> diag(d, second);
    for (std::size_t k = 0; k < d / 2; ++k) diag[k] = first;
    return diag;
}

std::vector<double> sparse_diag(std::size_t d, std::size_t count, double value) {
    std::vector<double> diag(d, 1.0);
    for (std::size_t k = 0; k < count && k < d; ++k) diag[k] = value;
    return diag;
}

}  // namespace

ScenarioData make_scenario(const ScenarioSpec& spec) {
    const int id = spec.example_id;
    if (id < 1 || id > 16) throw std::invalid_argument("scenario: unknown example id " + std::to_string(id));
    const bool multi_example = id >= 13 && id <= 16;
    const std::size_t n = spec.n != 0 ? spec.n : (multi_example ? 60 : 50);
    const std::size_t d = spec.d != 0 ? spec.d : 200;

    std::vector<std::size_t> taus = spec.taus;
    if (taus.empty()) {
        if (multi_example && n != 60)
            throw std::invalid_argument("scenario: examples 13-16 need explicit change-points when n != 60");
        if (id == 14)
            taus = {15, 30, 45};
        else if (multi_example)
            taus = {20, 40};
        else
            taus = {n / 2};
    }
    const std::size_t want_taus = id == 14 ? 3 : (multi_example ? 2 : 1);
    if (taus.size() != want_taus)
        throw std::invalid_argument("scenario: example " + std::to_string(id) + " takes exactly " +
                                    std::to_string(want_taus) + " change-point(s)");

    ScenarioData out;
    out.taus = taus;

    const auto gauss_segment = [&](std::size_t len, const std::vector<double>& mu, const CovSpec& cov,
                                   std::uint64_t sub_seed) { return gaussian(len, d, mu, cov, sub_seed); };

    switch (id) {
        case 1:
            out.description = "gaussian mean shift (0 -> 0.3 per coordinate)";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return gauss_segment(len, s == 0 ? std::vector<double>{} : constant_mu(d, 0.3),
                                     CovSpec::identity(), ss);
            });
            break;
        case 2:
            out.description = "gaussian scale shift (variance 1 -> 1.3)";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return gauss_segment(len, {}, CovSpec::identity(s == 0 ? 1.0 : 1.3), ss);
            });
            break;
        case 3:
            out.description = "gaussian N(0,2I) vs iid t(4) coordinates";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return s == 0 ? gauss_segment(len, {}, CovSpec::identity(2.0), ss) : iid_t(len, d, 4.0, ss);
            });
            break;
        case 4:
            out.description = "diagonal covariance (1,3 halves) vs 2I, equal trace";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return gauss_segment(len, {},
                                     s == 0 ? CovSpec::diagonal(half_half(d, 1.0, 3.0)) : CovSpec::identity(2.0),
                                     ss);
            });
            break;
        case 5: {
            const std::size_t count = sparse_count(d, spec.beta);
            out.description = "sparse mean shift in floor(d^beta) coordinates";
            std::vector<double> mu(d, 0.0);
            for (std::size_t k = 0; k < count; ++k) mu[k] = 1.0;
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return gauss_segment(len, s == 0 ? std::vector<double>{} : mu, CovSpec::identity(), ss);
            });
            break;
        }
        case 6: {
            const std::size_t count = sparse_count(d, spec.beta);
            out.description = "sparse scale shift (variance 3) in floor(d^beta) coordinates";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return gauss_segment(len, {},
                                     s == 0 ? CovSpec::identity() : CovSpec::diagonal(sparse_diag(d, count, 3.0)),
                                     ss);
            });
            break;
        }
        case 7:
            out.description = "uniform cube vs volume-matched l2 ball";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return s == 0 ? uniform_cube(len, d, 1.0, ss)
                              : uniform_l2_ball(len, d, RadiusMode::volume_match_cube(), ss);
            });
            break;
        case 8:
            out.description = "gaussian vs geometric gaussian sum (p = 0.2)";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return s == 0 ? gauss_segment(len, {}, CovSpec::identity(), ss)
                              : mgsn(len, d, 0.2, {}, CovSpec::identity(), ss);
            });
            break;
        case 9:
        case 11:
            out.description = "diagonal variance swap (1,3 halves vs 3,1 halves)";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return gauss_segment(len, {},
                                     CovSpec::diagonal(s == 0 ? half_half(d, 1.0, 3.0) : half_half(d, 3.0, 1.0)),
                                     ss);
            });
            break;
        case 10:
        case 12:
            out.description = "gaussian N(0,3I) vs iid t(4) coordinates";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return s == 0 ? gauss_segment(len, {}, CovSpec::identity(3.0), ss) : iid_t(len, d, 4.0, ss);
            });
            break;
        case 13:
            out.description = "mean ladder 0 -> 1 -> 0.5 under AR(1) correlation";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                const double level = s == 0 ? 0.0 : (s == 1 ? 1.0 : 0.5);
                return gauss_segment(len, level == 0.0 ? std::vector<double>{} : constant_mu(d, level),
                                     CovSpec::ar1(0.9), ss);
            });
            break;
        case 14:
            out.description = "scale ladder, variance (1/5)^i per segment";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                return gauss_segment(len, {}, CovSpec::identity(std::pow(0.2, static_cast<double>(s))), ss);
            });
            break;
        case 15:
            out.description = "uniform cube vs l2 ball vs l1 ball, equal volumes";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                if (s == 0) return uniform_cube(len, d, 1.0, ss);
                if (s == 1) return uniform_l2_ball(len, d, RadiusMode::volume_match_cube(), ss);
                return uniform_l1_ball(len, d, RadiusMode::volume_match_cube(), ss);
            });
            break;
        case 16:
            out.description = "geometric gaussian sum vs gaussian vs multivariate t(3)";
            out.data = assemble(n, d, taus, spec.seed, id, [&](std::size_t s, std::size_t len, std::uint64_t ss) {
                if (s == 0) return mgsn(len, d, 0.2, {}, CovSpec::identity(), ss);
                if (s == 1) return gaussian(len, d, {}, CovSpec::identity(), ss);
                return multivariate_t(len, d, 3.0, ss);
            });
            break;
        default:
            throw std::invalid_argument("scenario: unknown example id " + std::to_string(id));
    }
    return out;
}

}  // namespace pdcp
