#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pdcp/datagen.hpp"
#include "pdcp/matrix.hpp"
#include "pdcp/permutation.hpp"
#include "pdcp/rng.hpp"
#include "pdcp/scan.hpp"

using namespace pdcp;

namespace {

ObservationMatrix from_values(std::size_t n, std::size_t d, std::vector<double> values) {
    ObservationMatrix m(n, d);
    m.values = std::move(values);
    return m;
}

DistanceSpec l1_spec() {
    DistanceSpec s;
    s.kind = DistanceKind::l1;
    return s;
}

}  // namespace

TEST_CASE("pairwise_matrix worked examples") {
    // two identical rows
    auto D0 = pairwise_matrix(from_values(2, 2, {1.5, -2, 1.5, -2}), l1_spec());
    CHECK(D0.total_sum == 0.0);
    CHECK(D0.at(0, 1) == 0.0);

    // n=3, d=1, rows 0,1,3 under l1
    auto D = pairwise_matrix(from_values(3, 1, {0, 1, 3}), l1_spec());
    CHECK(D.at(0, 1) == 1.0);
    CHECK(D.at(0, 2) == 3.0);
    CHECK(D.at(1, 2) == 2.0);
    CHECK(D.row_sums[0] == 4.0);
    CHECK(D.row_sums[1] == 3.0);
    CHECK(D.row_sums[2] == 5.0);
    CHECK(D.total_sum == 12.0);
}

TEST_CASE("pairwise_matrix of permuted rows equals relabelled matrix") {
    auto data = oracle::random_matrix(9, 4, 21);
    DistanceSpec spec;
    auto D = pairwise_matrix(data, spec);

    std::vector<std::uint32_t> perm{3, 1, 4, 0, 8, 7, 2, 6, 5};
    ObservationMatrix shuffled(9, 4);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t k = 0; k < 4; ++k) shuffled.at(i, k) = data.at(perm[i], k);
    auto Dp = pairwise_matrix(shuffled, spec);
    auto expected = oracle::permute_matrix(D, perm);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) CHECK(Dp.at(i, j) == expected.at(i, j));
}

TEST_CASE("pairwise_matrix is independent of thread count") {
    auto data = oracle::random_matrix(40, 6, 33);
    DistanceSpec spec;
    auto D1 = pairwise_matrix(data, spec, 1);
    auto D4 = pairwise_matrix(data, spec, 4);
    CHECK(D1.dist == D4.dist);
    CHECK(D1.row_sums == D4.row_sums);
    CHECK(D1.total_sum == D4.total_sum);
}

TEST_CASE("segment_stats worked examples") {
    auto D = pairwise_matrix(from_values(4, 1, {0, 0, 10, 10}), l1_spec());

    auto s2 = segment_stats(D, 2);
    CHECK(s2.t11 == 0.0);
    CHECK(s2.t12 == 10.0);
    CHECK(s2.t22 == 0.0);

    // t = 3: suffix holds one point, so T22 has no pairs and is 0
    auto s3 = segment_stats(D, 3);
    CHECK(s3.t11 == doctest::Approx(20.0 / 3).epsilon(1e-15));
    CHECK(s3.t12 == doctest::Approx(20.0 / 3).epsilon(1e-15));
    CHECK(s3.t22 == 0.0);

    auto Did = pairwise_matrix(from_values(4, 1, {5, 5, 5, 5}), l1_spec());
    auto si = segment_stats(Did, 2);
    CHECK(si.t11 == 0.0);
    CHECK(si.t12 == 0.0);
    CHECK(si.t22 == 0.0);

    CHECK_THROWS_AS(segment_stats(D, 0), std::invalid_argument);
    CHECK_THROWS_AS(segment_stats(D, 4), std::invalid_argument);
}

TEST_CASE("weighted_divergence worked examples") {
    CHECK(weighted_divergence(0, 10, 0, 2, 4) == doctest::Approx(50.0).epsilon(1e-15));
    CHECK(weighted_divergence(7.25, 7.25, 7.25, 3, 9) == 0.0);
    CHECK(weighted_divergence(1, 3, 2, 5, 10) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK_THROWS_AS(weighted_divergence(1, 2, 3, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(weighted_divergence(1, 2, 3, 5, 5), std::invalid_argument);
}

TEST_CASE("candidate set bounds") {
    auto c = CandidateSet::from_delta(50, 0.05);
    CHECK(c.t_min == 2);
    CHECK(c.t_max == 48);

    auto tiny = CandidateSet::from_delta(4, CandidateSet::default_delta(4));
    CHECK(tiny.t_min == 2);
    CHECK(tiny.t_max == 2);

    CHECK_THROWS_AS(CandidateSet::from_delta(3, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(CandidateSet::from_delta(50, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CandidateSet::from_delta(50, 0.6), std::invalid_argument);
    CHECK(CandidateSet::default_delta(50) == 0.05);
    CHECK(CandidateSet::default_delta(10) == 0.2);
}

TEST_CASE("scan worked examples") {
    auto D = pairwise_matrix(from_values(4, 1, {0, 0, 10, 10}), l1_spec());
    auto cand = CandidateSet::from_delta(4, 0.5);
    CHECK(cand.t_min == 2);
    CHECK(cand.t_max == 2);
    auto res = scan(D, cand);
    CHECK(res.t_hat == 2);
    CHECK(res.s_hat == doctest::Approx(50.0).epsilon(1e-14));

    // identical rows: flat zero curve, earliest candidate wins
    auto Did = pairwise_matrix(from_values(6, 1, {1, 1, 1, 1, 1, 1}), l1_spec());
    auto cid = CandidateSet::from_delta(6, 0.4);
    auto rid = scan(Did, cid);
    CHECK(rid.s_hat == 0.0);
    CHECK(rid.t_hat == cid.t_min);
    for (auto& [t, v] : rid.curve) CHECK(v == 0.0);
}

TEST_CASE("scan matches per-t recomputation on random data for all kinds") {
    rng::Stream pick(55, {0});
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 8 + pick.uniform_below(33);
        const std::size_t d = 1 + pick.uniform_below(10);
        auto data = oracle::random_matrix(n, d, 1000 + rep);
        DistanceSpec spec;
        switch (rep % 5) {
            case 0: spec.kind = DistanceKind::l2; break;
            case 1: spec.kind = DistanceKind::l1; break;
            case 2: spec.kind = DistanceKind::exp; break;
            case 3: spec.kind = DistanceKind::block_l1; break;
            case 4: spec.kind = DistanceKind::block_exp; break;
        }
        if (spec.is_block()) {
            std::size_t left = d;
            while (left > 0) {
                const std::size_t b = 1 + pick.uniform_below(std::min<std::size_t>(left, 3));
                spec.block_sizes.push_back(b);
                left -= b;
            }
        }
        auto D = pairwise_matrix(data, spec);
        auto cand = CandidateSet::from_delta(n, CandidateSet::default_delta(n));
        auto res = scan(D, cand);

        double best = -1.0;
        std::size_t best_t = 0;
        for (auto& [t, v] : res.curve) {
            const auto st = segment_stats(D, t);
            const double expect = weighted_divergence(st.t11, st.t12, st.t22, t, n);
            CHECK(v == doctest::Approx(expect).epsilon(1e-10));
            if (v > best) {
                best = v;
                best_t = t;
            }
        }
        CHECK(res.t_hat == best_t);
        CHECK(res.s_hat == best);
    }
}

TEST_CASE("scaling distances by c > 0 scales the curve by c^2 and keeps the argmax") {
    auto data = oracle::random_matrix(24, 5, 77);
    DistanceSpec spec;
    auto D = pairwise_matrix(data, spec);
    auto cand = CandidateSet::from_delta(24, 0.1);
    auto base = scan(D, cand);
    for (double c : {0.01, 3.0, 1000.0}) {
        DistanceMatrix Dc = D;
        for (auto& v : Dc.dist) v *= c;
        Dc.refresh_sums();
        auto res = scan(Dc, cand);
        CHECK(res.t_hat == base.t_hat);
        CHECK(res.s_hat == doctest::Approx(base.s_hat * c * c).epsilon(1e-12));
        for (std::size_t i = 0; i < base.curve.size(); ++i)
            CHECK(res.curve[i].second == doctest::Approx(base.curve[i].second * c * c).epsilon(1e-12));
    }
}

TEST_CASE("reversing the observations reverses the curve") {
    auto data = oracle::random_matrix(20, 4, 88);
    ObservationMatrix reversed(20, 4);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t k = 0; k < 4; ++k) reversed.at(i, k) = data.at(19 - i, k);
    DistanceSpec spec;
    auto Df = pairwise_matrix(data, spec);
    auto Dr = pairwise_matrix(reversed, spec);
    auto cand = CandidateSet::from_delta(20, 0.1);  // symmetric candidate set
    auto f = scan(Df, cand);
    auto r = scan(Dr, cand);
    const std::size_t n = 20;
    for (auto& [t, v] : f.curve) {
        const double mirrored = [&] {
            for (auto& [tr, vr] : r.curve)
                if (tr == n - t) return vr;
            return -1.0;
        }();
        CHECK(v == doctest::Approx(mirrored).epsilon(1e-12));
    }
    CHECK(r.t_hat == n - f.t_hat);  // unique maximiser in continuous data
    for (auto& [t, v] : f.curve) CHECK(v >= 0.0);
}

TEST_CASE("block distances see correlation changes that coordinate-wise ones miss") {
    // marginals stay N(0,1) throughout; within consecutive pairs the
    // correlation moves from 0 to 0.9 after the split
    const std::size_t n = 50, d = 100, tau = 25;
    const auto make = [&](std::uint64_t seed) {
        ObservationMatrix m(n, d);
        for (std::size_t i = 0; i < n; ++i) {
            rng::Stream st(seed, {rng::fnv1a("corr-change"), i});
            for (std::size_t k = 0; k < d; k += 2) {
                const double a = st.normal();
                const double b = st.normal();
                m.at(i, k) = a;
                m.at(i, k + 1) = i < tau ? b : 0.9 * a + std::sqrt(1.0 - 0.81) * b;
            }
        }
        return m;
    };

    const auto cand = CandidateSet::from_delta(n, 0.05);
    int plain_hits = 0, block_hits = 0;
    const int reps = 30;
    for (int r = 0; r < reps; ++r) {
        const auto data = make(rng::derive_seed(71, {(std::uint64_t)r}));
        for (bool blocked : {false, true}) {
            DistanceSpec spec;
            spec.kind = blocked ? DistanceKind::block_exp : DistanceKind::exp;
            if (blocked) spec.block_sizes.assign(d / 2, 2);
            const auto D = pairwise_matrix(data, spec);
            const auto res = scan(D, cand);
            PermutationConfig cfg;
            cfg.seed = rng::derive_seed(72, {(std::uint64_t)r});
            const auto out = permutation_test(D, cand, cfg);
            const bool hit = out.reject && res.t_hat >= tau - 2 && res.t_hat <= tau + 2;
            (blocked ? block_hits : plain_hits) += hit;
        }
    }
    CHECK(plain_hits <= 4);
    CHECK(block_hits >= 24);
}

TEST_CASE("high-dimensional concentration of the l2 distance") {
    // iid N(0, I_d) rows: at d = 10000 the normalised distance sits at
    // sqrt(2) to within 0.05 essentially always
    const std::size_t d = 10000;
    DistanceSpec spec;
    int within = 0;
    const int pairs = 200;
    for (int p = 0; p < pairs; ++p) {
        auto m = gaussian(2, d, {}, CovSpec::identity(), rng::derive_seed(4242, {(std::uint64_t)p}));
        const double v = eval_distance(spec, m.row(0), m.row(1));
        if (std::fabs(v - std::sqrt(2.0)) <= 0.05) ++within;
    }
    CHECK(within >= 198);
}
