#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "pdcp/rng.hpp"

using namespace pdcp::rng;

TEST_CASE("streams are deterministic and key-sensitive") {
    Stream a(42, {1, 2});
    Stream b(42, {1, 2});
    Stream c(42, {1, 3});
    Stream d(43, {1, 2});
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.u64();
        CHECK(va == b.u64());
        if (va != c.u64()) differs_c = true;
        if (va != d.u64()) differs_d = true;
    }
    CHECK(differs_c);
    CHECK(differs_d);
}

TEST_CASE("uniform01 stays in [0,1) and uniform_pos in (0,1]") {
    Stream s(7, {0});
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = s.uniform_pos();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("uniform_below covers the range evenly") {
    Stream s(11, {5});
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[s.uniform_below(7)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("normal moments") {
    Stream s(3, {9});
    const int n = 400000;
    double sum = 0, sum2 = 0, sum3 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        sum += x;
        sum2 += x * x;
        sum3 += x * x * x;
    }
    CHECK(std::fabs(sum / n) < 0.01);
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::fabs(sum3 / n) < 0.03);
}

TEST_CASE("gamma matches mean and variance") {
    Stream s(5, {1});
    for (double shape : {0.5, 2.0, 7.5}) {
        const int n = 200000;
        double sum = 0, sum2 = 0;
        for (int i = 0; i < n; ++i) {
            const double x = s.gamma(shape);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        CHECK(mean == doctest::Approx(shape).epsilon(0.02));
        CHECK(sum2 / n - mean * mean == doctest::Approx(shape).epsilon(0.05));
    }
}

TEST_CASE("student t tails at df=4") {
    // P(|T| > x) ~ 3/x^4 in the far tail when df = 4
    Stream s(31337, {7});
    const int n = 1000000;
    int over5 = 0, over10 = 0;
    double sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double t = s.student_t(4.0);
        sum2 += t * t;
        const double a = std::fabs(t);
        if (a > 5) ++over5;
        if (a > 10) ++over10;
    }
    CHECK(sum2 / n == doctest::Approx(2.0).epsilon(0.05));
    CHECK(static_cast<double>(over5) / n == doctest::Approx(7.51e-3).epsilon(0.15));
    CHECK(static_cast<double>(over10) / n == doctest::Approx(5.58e-4).epsilon(0.35));
}

TEST_CASE("geometric_count mean and support") {
    Stream s(17, {4});
    const int n = 100000;
    double sum = 0;
    std::uint64_t lowest = 1000;
    for (int i = 0; i < n; ++i) {
        const auto k = s.geometric_count(0.2);
        sum += static_cast<double>(k);
        lowest = std::min(lowest, k);
    }
    CHECK(lowest == 1);
    CHECK(sum / n == doctest::Approx(5.0).epsilon(0.01));
    CHECK(Stream(1, {1}).geometric_count(1.0) == 1);
}

TEST_CASE("shuffle is a permutation and seed-stable") {
    std::vector<int> v(20);
    std::iota(v.begin(), v.end(), 0);
    Stream s1(77, {8});
    s1.shuffle(v);
    std::vector<int> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) CHECK(sorted[i] == i);

    std::vector<int> w(20);
    std::iota(w.begin(), w.end(), 0);
    Stream s2(77, {8});
    s2.shuffle(w);
    CHECK(v == w);
}
