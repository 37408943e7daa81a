#include <cmath>

#include "doctest.h"
#include "siltlab/local_time.hpp"
#include "siltlab/walk.hpp"

using namespace siltlab;

namespace {

// O(n^2) pair count, the independent route to B_n
std::int64_t pairwise_b(const std::vector<Point>& positions, std::size_t n) {
    std::int64_t b = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (positions[i] == positions[j]) ++b;
    return b;
}

}  // namespace

TEST_CASE("constant path accumulates at one site") {
    WalkPath p;
    p.config = {1, 7, 0, 0};
    for (int i = 0; i <= 7; ++i) p.positions.push_back(origin());
    LocalTimeField f = accumulate(p);
    CHECK(f.count(origin()) == 7);
    CHECK(f.elapsed() == 7);
    CHECK(f.support_size() == 1);
}

TEST_CASE("hand path counts") {
    WalkPath p;
    p.config = {1, 4, 0, 0};
    for (std::int64_t x : {0, 1, 0, -1}) p.positions.push_back(make_point({x}));
    p.positions.push_back(make_point({0}));  // S_4, not counted
    LocalTimeField f = accumulate(p);
    CHECK(f.elapsed() == 4);
    CHECK(f.count(make_point({0})) == 2);
    CHECK(f.count(make_point({1})) == 1);
    CHECK(f.count(make_point({-1})) == 1);
}

TEST_CASE("mass identity: total count equals elapsed time") {
    for (std::uint64_t s : {1u, 2u, 3u}) {
        LocalTimeField f = accumulate_walk({3, 5000, s, 0});
        std::int64_t total = 0;
        f.for_each([&](const Point&, std::int64_t c) { total += c; });
        CHECK(total == 5000);
        CHECK(f.elapsed() == 5000);
    }
}

TEST_CASE("intersection stats: distinct and constant paths") {
    WalkPath distinct;
    distinct.config = {1, 5, 0, 0};
    for (std::int64_t x : {0, 1, 2, 3, 4, 5}) distinct.positions.push_back(make_point({x}));
    IntersectionStats s1 = intersection_stats(accumulate(distinct));
    CHECK(s1.b_n == 0);
    CHECK(s1.norm2_sq == 5);
    CHECK(s1.identity_holds());

    WalkPath constant;
    constant.config = {1, 6, 0, 0};
    for (int i = 0; i <= 6; ++i) constant.positions.push_back(origin());
    IntersectionStats s2 = intersection_stats(accumulate(constant));
    CHECK(s2.b_n == 15);            // 6*5/2
    CHECK(s2.norm2_sq == 36);       // 2*15 + 6
    CHECK(s2.identity_holds());
}

TEST_CASE("random d=5 path matches the pairwise oracle") {
    WalkConfig cfg{5, 1000, 2024, 11};
    WalkPath p = simulate(cfg);
    IntersectionStats s = intersection_stats(accumulate(p));
    CHECK(s.b_n == pairwise_b(p.positions, 1000));
    CHECK(s.identity_holds());
}

TEST_CASE("incremental B matches stats and the oracle") {
    SUBCASE("two steps at the origin") {
        IncrementalB inc(1);
        inc.consume(origin());
        CHECK(inc.value() == 0);
        inc.consume(origin());
        CHECK(inc.value() == 1);
    }
    SUBCASE("random stream equals field computation and pairwise count") {
        WalkConfig cfg{3, 2000, 99, 5};
        WalkPath p = simulate(cfg);
        IncrementalB inc(3);
        for (std::size_t k = 0; k < 2000; ++k) inc.consume(p.positions[k]);
        IntersectionStats s = intersection_stats(inc.field());
        CHECK(inc.value() == s.b_n);
        CHECK(inc.value() == pairwise_b(p.positions, 2000));
    }
}

TEST_CASE("identity holds exactly across dimensions and lengths") {
    for (int d : {1, 3, 5}) {
        for (std::int64_t n : {1, 10, 1000, 20000}) {
            LocalTimeField f = accumulate_walk({d, n, 31337, static_cast<std::uint64_t>(d)});
            IntersectionStats s = intersection_stats(f);
            CHECK(s.identity_holds());
            CHECK(s.n == n);
        }
    }
}

TEST_CASE("q norms") {
    LocalTimeField f(1);
    for (int i = 0; i < 3; ++i) f.add(make_point({1}));
    for (int i = 0; i < 4; ++i) f.add(make_point({2}));
    CHECK(q_norm(f, 1.0) == doctest::Approx(7.0));
    CHECK(q_norm(f, 2.0) == doctest::Approx(5.0));  // 3-4-5
    CHECK(q_norm(f, 3.0) == doctest::Approx(std::cbrt(27.0 + 64.0)));
    CHECK_THROWS_AS(q_norm(f, 0.5), std::invalid_argument);

    LocalTimeField g = accumulate_walk({5, 4000, 4, 4});
    CHECK(q_norm(g, 1.0) == doctest::Approx(4000.0));
    IntersectionStats s = intersection_stats(g);
    CHECK(q_norm(g, 2.0) == doctest::Approx(std::sqrt(static_cast<double>(s.norm2_sq))));
}

TEST_CASE("level sets") {
    SUBCASE("window membership") {
        LocalTimeField f(1);
        for (int i = 0; i < 10; ++i) f.add(origin());
        LevelSetSpec spec;
        spec.kind = LevelSetKind::Window;
        spec.A = 2.0;
        spec.xi = 8.0;  // window [4, 16)
        PointSet s = level_set(f, spec);
        REQUIRE(s.size() == 1);
        CHECK(s[0] == origin());
        spec.xi = 4.0;  // window [2, 8): count 10 is out
        CHECK(level_set(f, spec).empty());
    }
    SUBCASE("empty field") {
        LocalTimeField f(3);
        LevelSetSpec spec;
        spec.kind = LevelSetKind::Threshold;
        spec.threshold = 1.0;
        CHECK(level_set(f, spec).empty());
    }
    SUBCASE("window equals a direct filter on a random field") {
        LocalTimeField f = accumulate_walk({3, 100000, 8, 1});
        const double root_n = std::sqrt(100000.0);
        LevelSetSpec spec;
        spec.kind = LevelSetKind::Window;
        spec.A = 3.0;
        spec.xi = root_n / 30.0;  // keep the window populated for d=3
        PointSet got = level_set(f, spec);
        PointSet want;
        f.for_each([&](const Point& p, std::int64_t c) {
            if (static_cast<double>(c) >= spec.xi / spec.A &&
                static_cast<double>(c) < spec.A * spec.xi)
                want.push_back(p);
        });
        std::sort(want.begin(), want.end());
        CHECK(got == want);
        CHECK(!got.empty());
    }
    SUBCASE("range and threshold kinds") {
        LocalTimeField f = accumulate_walk({1, 10000, 5, 2});
        LevelSetSpec range;
        range.kind = LevelSetKind::Range;
        range.eps0 = 0.2;
        PointSet rs = level_set(f, range);
        const double lo = std::pow(10000.0, 0.3), hi = std::pow(10000.0, 0.7);
        for (const auto& p : rs) {
            CHECK(static_cast<double>(f.count(p)) >= lo);
            CHECK(static_cast<double>(f.count(p)) <= hi);
        }
        LevelSetSpec thr;
        thr.kind = LevelSetKind::Threshold;
        thr.threshold = 5.0;
        for (const auto& p : level_set(f, thr)) CHECK(f.count(p) >= 5);
    }
    SUBCASE("validation") {
        LevelSetSpec bad;
        bad.kind = LevelSetKind::Window;
        bad.A = 0.5;
        CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    }
}

TEST_CASE("threshold level sets grow monotonically in time") {
    WalkConfig cfg{3, 3000, 12, 0};
    LocalTimeField f(3);
    PointSet prev;
    LevelSetSpec spec;
    spec.kind = LevelSetKind::Threshold;
    spec.threshold = 3.0;
    walk_stream(cfg, [&](std::int64_t k, const Point& p) {
        if (k < 3000) f.add(p);
        if (k > 0 && k % 1000 == 0) {
            PointSet cur = level_set(f, spec);
            for (const auto& q : prev) CHECK(std::binary_search(cur.begin(), cur.end(), q));
            prev = cur;
        }
    });
}

TEST_CASE("restricted q norm") {
    LocalTimeField f = accumulate_walk({3, 2000, 21, 0});
    PointSet support;
    f.for_each([&](const Point& p, std::int64_t) { support.push_back(p); });
    std::sort(support.begin(), support.end());
    CHECK(restricted_q_norm(f, support, 2.0) == doctest::Approx(q_norm(f, 2.0)));

    PointSet far{make_point({1000, 1000, 1000})};
    CHECK(restricted_q_norm(f, far, 2.0) == 0.0);

    // filtered brute force on a random half
    PointSet half(support.begin(), support.begin() + support.size() / 2);
    double want = 0.0;
    for (const auto& p : half) {
        double c = static_cast<double>(f.count(p));
        want += c * c;
    }
    CHECK(restricted_q_norm(f, half, 2.0) == doctest::Approx(std::sqrt(want)));
}

TEST_CASE("prefix decomposition and pointwise superadditivity") {
    WalkConfig cfg{3, 1000, 87, 0};
    WalkPath p = simulate(cfg);
    const std::size_t t = 400, n = 1000;
    LocalTimeField head(3), tail(3), full(3);
    for (std::size_t k = 0; k < t; ++k) head.add(p.positions[k]);
    for (std::size_t k = t; k < n; ++k) tail.add(p.positions[k]);
    for (std::size_t k = 0; k < n; ++k) full.add(p.positions[k]);
    full.for_each([&](const Point& site, std::int64_t c) {
        std::int64_t a = head.count(site), b = tail.count(site);
        CHECK(a + b == c);                    // decomposition
        CHECK(a * a + b * b <= c * c);        // superadditivity of squares
    });
    // monotonicity: head counts never exceed full counts
    head.for_each([&](const Point& site, std::int64_t c) { CHECK(c <= full.count(site)); });
}

TEST_CASE("merge adds counts associatively") {
    LocalTimeField a = accumulate_walk({3, 500, 1, 0});
    LocalTimeField b = accumulate_walk({3, 700, 1, 1});
    LocalTimeField ab = a;
    ab.merge(b);
    CHECK(ab.elapsed() == 1200);
    ab.for_each([&](const Point& p, std::int64_t c) { CHECK(c == a.count(p) + b.count(p)); });
}

TEST_CASE("csv round trip") {
    LocalTimeField f = accumulate_walk({2, 300, 5, 0});
    LocalTimeField g = LocalTimeField::from_csv(f.to_csv(), 2);
    CHECK(g.elapsed() == f.elapsed());
    CHECK(g.support_size() == f.support_size());
    f.for_each([&](const Point& p, std::int64_t c) { CHECK(g.count(p) == c); });
}
