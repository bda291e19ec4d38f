#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string_view>
#include <vector>

// Deterministic stream RNG. Streams are derived from (seed, tag, indices...)
// so that independent work items (rows, permutation replicates, segments)
// draw from disjoint streams regardless of scheduling order. Samplers are
// implemented here rather than with <random> distributions because the
// standard leaves distribution algorithms unspecified and we promise
// bit-identical output for a given seed.

namespace pdcp::rng {

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    return mix64(state);
}

// Derive a child seed; used when a component needs to hand sub-seeds to
// otherwise independent generators.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = seed;
    for (std::uint64_t k : keys) h = mix64(h ^ (k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
    return h;
}

// xoshiro256++ seeded through splitmix64 from a derived key.
class Stream {
public:
    Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
        std::uint64_t h = derive_seed(seed, keys);
        for (auto& w : state_) w = splitmix64(h);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform on [0,1), 53-bit resolution
    double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // uniform on (0,1]; safe as a log() argument
    double uniform_pos() { return static_cast<double>((u64() >> 11) + 1) * 0x1.0p-53; }

    // unbiased integer in [0, bound)
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = u64();
            if (r >= threshold) return r % bound;
        }
    }

    // standard normal, Box-Muller (second variate cached)
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform_pos()); }

    // Gamma(shape, 1), Marsaglia-Tsang; shapes < 1 boosted via U^(1/shape)
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("rng: gamma shape must be positive");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

    double student_t(double df) {
        const double z = normal();
        const double v = chi_squared(df);
        return z / std::sqrt(v / df);
    }

    // geometric on {1, 2, ...} with success probability p
    std::uint64_t geometric_count(double p) {
        if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("rng: geometric p must be in (0,1]");
        if (p == 1.0) return 1;
        const double u = uniform_pos();
        const double k = std::floor(std::log(u) / std::log1p(-p));
        return 1 + static_cast<std::uint64_t>(k);
    }

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace pdcp::rng
