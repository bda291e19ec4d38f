#include "pdcp/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace pdcp {

std::string to_string(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::l2: return "l2";
        case DistanceKind::l1: return "l1";
        case DistanceKind::exp: return "exp";
        case DistanceKind::block_l1: return "block_l1";
        case DistanceKind::block_exp: return "block_exp";
    }
    throw std::logic_error("unknown distance kind");
}

DistanceKind distance_kind_from_string(const std::string& name) {
    if (name == "l2") return DistanceKind::l2;
    if (name == "l1") return DistanceKind::l1;
    if (name == "exp") return DistanceKind::exp;
    if (name == "block_l1") return DistanceKind::block_l1;
    if (name == "block_exp") return DistanceKind::block_exp;
    throw std::invalid_argument("unknown distance kind: " + name);
}

void DistanceSpec::validate(std::size_t dim) const {
    if (dim < 1) throw std::invalid_argument("distance: dimension must be >= 1");
    if (uses_exp_scale() && !(exp_scale > 0.0))
        throw std::invalid_argument("distance: exp_scale must be positive");
    if (is_block()) {
        if (block_sizes.empty())
            throw std::invalid_argument("distance: block kinds need a block partition");
        std::size_t covered = 0;
        for (std::size_t b : block_sizes) {
            if (b < 1) throw std::invalid_argument("distance: block sizes must be >= 1");
            covered += b;
        }
        if (covered != dim)
            throw std::invalid_argument("distance: block sizes must sum to the dimension (got " +
                                        std::to_string(covered) + ", need " + std::to_string(dim) + ")");
    } else if (!block_sizes.empty()) {
        throw std::invalid_argument("distance: block_sizes only apply to block kinds");
    }
}

nlohmann::json DistanceSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind);
    if (uses_exp_scale()) j["exp_scale"] = exp_scale;
    if (is_block()) j["block_sizes"] = block_sizes;
    return j;
}

DistanceSpec DistanceSpec::from_json(const nlohmann::json& j) {
    DistanceSpec spec;
    spec.kind = distance_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("exp_scale")) spec.exp_scale = j.at("exp_scale").get<double>();
    if (j.contains("block_sizes")) spec.block_sizes = j.at("block_sizes").get<std::vector<std::size_t>>();
    return spec;
}

namespace detail {

double eval_distance_unchecked(const DistanceSpec& spec, const double* x, const double* y, std::size_t d) {
    switch (spec.kind) {
        case DistanceKind::l2: {
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = x[k] - y[k];
                acc += diff * diff;
            }
            return std::sqrt(acc / static_cast<double>(d));
        }
        case DistanceKind::l1: {
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) acc += std::fabs(x[k] - y[k]);
            return acc / static_cast<double>(d);
        }
        case DistanceKind::exp: {
            const double inv_scale = 1.0 / spec.exp_scale;
            double acc = 0.0;
            // 1 - e^{-t/lambda} via expm1 so tiny gaps do not cancel
            for (std::size_t k = 0; k < d; ++k)
                acc += -std::expm1(-std::fabs(x[k] - y[k]) * inv_scale);
            return acc / static_cast<double>(d);
        }
        case DistanceKind::block_l1: {
            double acc = 0.0;
            std::size_t off = 0;
            for (std::size_t len : spec.block_sizes) {
                double sq = 0.0;
                for (std::size_t k = off; k < off + len; ++k) {
                    const double diff = x[k] - y[k];
                    sq += diff * diff;
                }
                acc += std::sqrt(sq);
                off += len;
            }
            return acc / static_cast<double>(spec.block_sizes.size());
        }
        case DistanceKind::block_exp: {
            const double inv_scale = 1.0 / spec.exp_scale;
            double acc = 0.0;
            std::size_t off = 0;
            for (std::size_t len : spec.block_sizes) {
                double sq = 0.0;
                for (std::size_t k = off; k < off + len; ++k) {
                    const double diff = x[k] - y[k];
                    sq += diff * diff;
                }
                acc += -std::expm1(-std::sqrt(sq) * inv_scale);
                off += len;
            }
            return acc / static_cast<double>(spec.block_sizes.size());
        }
    }
    throw std::logic_error("unknown distance kind");
}

}  // namespace detail

double eval_distance(const DistanceSpec& spec, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("distance: dimension mismatch (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()) + ")");
    spec.validate(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!std::isfinite(x[k]) || !std::isfinite(y[k]))
            throw std::invalid_argument("distance: non-finite coordinate at index " + std::to_string(k));
    }
    return detail::eval_distance_unchecked(spec, x.data(), y.data(), x.size());
}

}  // namespace pdcp
