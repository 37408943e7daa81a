#include <cmath>
#include <map>

#include "doctest.h"
#include "siltlab/local_time.hpp"
#include "siltlab/walk.hpp"

using namespace siltlab;

TEST_CASE("one step stays inside the l1 ball") {
    Rng rng(42, 0);
    for (int d : {1, 2, 5}) {
        Point cur{};
        for (int i = 0; i < 200; ++i) {
            Point nxt = step(cur, d, rng);
            CHECK(l1_dist(cur, nxt, d) <= 1);
            cur = nxt;
        }
    }
}

TEST_CASE("d=1 step law: three candidates near 1/3") {
    Rng rng(7, 0);
    std::map<std::int64_t, int> freq;
    const int n = 90000;
    for (int i = 0; i < n; ++i) {
        Point nxt = step(origin(), 1, rng);
        ++freq[nxt[0]];
    }
    CHECK(freq.size() == 3);
    for (auto [delta, count] : freq) {
        CHECK(delta >= -1);
        CHECK(delta <= 1);
        double sigma = std::sqrt(n * (1.0 / 3.0) * (2.0 / 3.0));
        CHECK(std::abs(count - n / 3.0) < 4.0 * sigma);
    }
}

TEST_CASE("d=5 one-step frequencies within 4 sigma of 1/11, chi-square sane") {
    const int d = 5;
    const std::int64_t n = 1000000;
    WalkConfig cfg{d, n, 20240601, 0};
    std::map<Point, std::int64_t> freq;
    Point prev{};
    walk_stream(cfg, [&](std::int64_t k, const Point& p) {
        if (k > 0) ++freq[sub(p, prev)];
        prev = p;
    });
    CHECK(freq.size() == 11);
    const double expect = static_cast<double>(n) / 11.0;
    const double sigma = std::sqrt(n * (1.0 / 11.0) * (10.0 / 11.0));
    double chi_sq = 0.0;
    for (auto& [delta, count] : freq) {
        CHECK(std::abs(count - expect) < 4.0 * sigma);
        chi_sq += (count - expect) * (count - expect) / expect;
    }
    // 99.9% quantile of chi2 with 10 dof
    CHECK(chi_sq < 29.59);
}

TEST_CASE("simulate: zero steps gives the origin path") {
    WalkPath p = simulate({5, 0, 9, 9});
    REQUIRE(p.positions.size() == 1);
    CHECK(p.positions[0] == origin());
}

TEST_CASE("simulate is deterministic in (seed, stream)") {
    WalkConfig cfg{3, 5000, 123456789, 17};
    WalkPath a = simulate(cfg);
    WalkPath b = simulate(cfg);
    CHECK(a.positions == b.positions);
    WalkConfig other = cfg;
    other.stream_id = 18;
    CHECK(simulate(other).positions != a.positions);
}

TEST_CASE("streaming and materialized paths agree") {
    WalkConfig cfg{5, 2000, 77, 3};
    WalkPath p = simulate(cfg);
    std::size_t idx = 0;
    walk_stream(cfg, [&](std::int64_t, const Point& pos) {
        REQUIRE(idx < p.positions.size());
        CHECK(pos == p.positions[idx]);
        ++idx;
    });
    CHECK(idx == p.positions.size());
}

TEST_CASE("endpoint CLT: mean S_n near zero componentwise") {
    // d=5, n = 10^4, 10^3 replicas; per-coordinate step variance is 2/11
    const int d = 5;
    const std::int64_t n = 10000;
    const int replicas = 1000;
    double mean[5] = {};
    for (int r = 0; r < replicas; ++r) {
        WalkConfig cfg{d, n, 555, static_cast<std::uint64_t>(r)};
        walk_stream(cfg, [&](std::int64_t k, const Point& p) {
            if (k == n)
                for (int i = 0; i < d; ++i) mean[i] += static_cast<double>(p[i]);
        });
    }
    const double sigma_mean = std::sqrt(static_cast<double>(n) * (2.0 / 11.0) / replicas);
    for (int i = 0; i < d; ++i) {
        mean[i] /= replicas;
        CHECK(std::abs(mean[i]) < 4.0 * sigma_mean);
    }
}

TEST_CASE("config validation and budget errors") {
    CHECK_THROWS_AS(simulate({5, 100, 1, 0}, 50), std::length_error);
    CHECK_THROWS_AS(simulate({0, 10, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(simulate({5, -1, 1, 0}), std::invalid_argument);
}
