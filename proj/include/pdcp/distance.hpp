#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace pdcp {

// The distance family phi_{h,psi}(x,y) = h( (1/d) sum_k psi(|x_k - y_k|) )
// and its block generalisation phi^B = h( (1/b) sum_i psi(||x_i - y_i||) )
// over a contiguous partition of the coordinates.
//
//   l2        h(t) = sqrt(t), psi(t) = t^2   -> ||x-y|| / sqrt(d)
//   l1        h(t) = t,       psi(t) = t
//   exp       h(t) = t,       psi(t) = 1 - exp(-t/lambda)
//   block_l1  psi(t) = t on per-block Euclidean norms
//   block_exp psi(t) = 1 - exp(-t/lambda) on per-block norms
enum class DistanceKind { l2, l1, exp, block_l1, block_exp };

std::string to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(const std::string& name);

struct DistanceSpec {
    DistanceKind kind = DistanceKind::l2;
    double exp_scale = 2.0;                  // lambda in psi(t) = 1 - exp(-t/lambda)
    std::vector<std::size_t> block_sizes;    // contiguous partition; block kinds only

    bool is_block() const { return kind == DistanceKind::block_l1 || kind == DistanceKind::block_exp; }
    bool uses_exp_scale() const { return kind == DistanceKind::exp || kind == DistanceKind::block_exp; }

    // Throws std::invalid_argument on bad parameters or a partition that does
    // not cover {1..dim} exactly.
    void validate(std::size_t dim) const;

    nlohmann::json to_json() const;
    static DistanceSpec from_json(const nlohmann::json& j);
};

// phi_{h,psi}(x, y). Validates dimensions, the distance parameters, and
// finiteness of every coordinate (non-finite input is a hard error).
double eval_distance(const DistanceSpec& spec, std::span<const double> x, std::span<const double> y);

namespace detail {

// Validation-free kernel shared with the pairwise matrix builder, which
// checks its inputs once up front. Must compute exactly what eval_distance
// computes.
double eval_distance_unchecked(const DistanceSpec& spec, const double* x, const double* y, std::size_t d);

}  // namespace detail

}  // namespace pdcp
