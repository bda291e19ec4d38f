#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdcp/matrix.hpp"

namespace pdcp {

// Covariance structures used by the simulation scenarios: sigma^2 * I,
// diag(v), or the AR(1) correlation matrix with entries rho^|i-j|.
struct CovSpec {
    enum class Type { scaled_identity, diagonal, ar1 };

    Type type = Type::scaled_identity;
    double scale = 1.0;         // scaled_identity
    std::vector<double> diag;   // diagonal
    double rho = 0.0;           // ar1

    static CovSpec identity(double sigma2 = 1.0);
    static CovSpec diagonal(std::vector<double> variances);
    static CovSpec ar1(double rho);  // throws if |rho| >= 1

    void validate(std::size_t d) const;
};

// All generators derive one stream per (seed, generator-tag, row), so output
// is bit-identical for a given seed and independent of evaluation order.

// Rows iid N(mu, cov); empty mu means zero. AR(1) rows are built by the
// recursion X_1 = e_1, X_k = rho X_{k-1} + sqrt(1-rho^2) e_k, whose
// covariance is exactly rho^|i-j|.
ObservationMatrix gaussian(std::size_t n, std::size_t d, const std::vector<double>& mu,
                           const CovSpec& cov, std::uint64_t seed);

// Every entry iid standard Student-t with df degrees of freedom.
ObservationMatrix iid_t(std::size_t n, std::size_t d, double df, std::uint64_t seed);

// Rows Z = X / sqrt(W/df) with X ~ N(0, I_d) and W ~ chi^2(df): the joint
// multivariate t, with one mixing variable per row.
ObservationMatrix multivariate_t(std::size_t n, std::size_t d, double df, std::uint64_t seed);

// Geometric random sum of iid Gaussian vectors: Z = sum_{i=1}^N X_i with
// N ~ Geometric(p) on {1,2,...} and X_i iid N(mu, cov).
ObservationMatrix mgsn(std::size_t n, std::size_t d, double p, const std::vector<double>& mu,
                       const CovSpec& cov, std::uint64_t seed);

// Entries iid Uniform(-half_width, half_width).
ObservationMatrix uniform_cube(std::size_t n, std::size_t d, double half_width, std::uint64_t seed);

struct RadiusMode {
    enum class Kind { explicit_radius, volume_match_cube };
    Kind kind = Kind::volume_match_cube;
    double radius = 0.0;

    static RadiusMode explicit_radius(double r);
    static RadiusMode volume_match_cube() { return {}; }
};

// Radii solving Vol(ball) = Vol([-1,1]^d), computed in log space.
double l2_ball_radius_matching_cube(std::size_t d);  // 2 * Gamma(d/2+1)^(1/d) / sqrt(pi)
double l1_ball_radius_matching_cube(std::size_t d);  // (d!)^(1/d)

// Rows uniform in the Euclidean ball: uniform direction times r * U^(1/d).
ObservationMatrix uniform_l2_ball(std::size_t n, std::size_t d, RadiusMode mode, std::uint64_t seed);

// Rows uniform in the l1 ball: normalised exponentials with random signs,
// scaled by r * U^(1/d).
ObservationMatrix uniform_l1_ball(std::size_t n, std::size_t d, RadiusMode mode, std::uint64_t seed);

// floor(d^beta), evaluated through exp2/log2 so power-of-two grids land on
// exact integers.
std::size_t sparse_count(std::size_t d, double beta);

// Simulation scenario registry. Example ids follow the numbering the result
// tables use; ids 11 and 12 are aliases of 9 and 10 (the same distributions
// under the source's alternative numbering).
struct ScenarioSpec {
    int example_id = 1;
    std::size_t n = 0;               // 0 = example default
    std::size_t d = 0;               // 0 = example default
    std::vector<std::size_t> taus;   // empty = example default
    double beta = 0.6;               // examples 5-6 sparsity exponent
    std::uint64_t seed = 0;
};

struct ScenarioData {
    ObservationMatrix data;
    std::vector<std::size_t> taus;  // true change-points (prefix ends)
    std::string description;
};

ScenarioData make_scenario(const ScenarioSpec& spec);

}  // namespace pdcp
