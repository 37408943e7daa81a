#include <cmath>

#include <stdexcept>
#include "doctest.h"
#include "siltlab/potential.hpp"

using namespace siltlab;

TEST_CASE("horizon zero: only the delta term") {
    GreenTable t = green_truncated(5, 3, 0);
    CHECK(t.g0() == doctest::Approx(1.0));
    CHECK(t.gamma() == doctest::Approx(1.0));
    CHECK(t.sum_sq() == doctest::Approx(1.0));
    CHECK(t.value_at(make_point({1, 0, 0, 0, 0})) == 0.0);
}

TEST_CASE("symmetry under sign flips and coordinate permutations") {
    GreenTable t = green_truncated(5, 6, 60);
    Point a = make_point({1, -2, 0, 3, 0});
    Point b = make_point({-3, 2, 0, 0, 1});  // same multiset of magnitudes
    CHECK(t.value_at(a) == doctest::Approx(t.value_at(b)).epsilon(1e-14));
    Point c = make_point({2, 1, 0, 0, 0});
    Point cneg = make_point({-2, -1, 0, 0, 0});
    CHECK(t.value_at(c) == doctest::Approx(t.value_at(cneg)).epsilon(1e-14));
    // nonincreasing along an axis
    double prev = t.g0();
    for (int r = 1; r <= 6; ++r) {
        double v = t.value_at(make_point({r, 0, 0, 0, 0}));
        CHECK(v <= prev);
        prev = v;
    }
    CHECK(t.g0() >= 1.0);
}

TEST_CASE("series is monotone in the horizon") {
    GreenTable a = green_truncated(5, 6, 30);
    GreenTable b = green_truncated(5, 6, 120);
    CHECK(a.g0() < b.g0());
    CHECK(a.value_at(make_point({2, 1, 0, 0, 0})) <= b.value_at(make_point({2, 1, 0, 0, 0})));
    CHECK(b.tail_gap() >= 0.0);
}

TEST_CASE("sum of squares grows with box and horizon") {
    double s1 = green_truncated(5, 5, 50).sum_sq();
    double s2 = green_truncated(5, 7, 50).sum_sq();
    double s3 = green_truncated(5, 7, 100).sum_sq();
    CHECK(s1 <= s2);
    CHECK(s2 <= s3);
    CHECK(s1 > 1.0);
}

TEST_CASE("self convergence at moderate scale") {
    GreenTable a = green_truncated(5, 14, 600);
    GreenTable b = green_truncated(5, 18, 1200);
    CHECK(std::abs(a.g0() - b.g0()) / b.g0() < 5e-5);  // 4 significant digits
}

TEST_CASE("result does not depend on the worker count") {
    GreenTable a = green_truncated(5, 5, 40, 1);
    GreenTable b = green_truncated(5, 5, 40, 2);
    CHECK(a.g0() == b.g0());
    CHECK(a.sum_sq() == b.sum_sq());
}

TEST_CASE("dimension and budget guards") {
    CHECK_THROWS_AS(green_truncated(2, 5, 10), std::domain_error);
    CHECK_THROWS_AS(green_truncated(5, 70, 10), std::length_error);
    GreenTable low = green_truncated(3, 5, 40);
    CHECK_THROWS_AS(low.sum_sq(), std::domain_error);
}

TEST_CASE("csv round trip") {
    GreenTable t = green_truncated(5, 4, 25);
    GreenTable u = GreenTable::from_csv(t.to_csv());
    CHECK(u.dim() == 5);
    CHECK(u.box_radius() == 4);
    CHECK(u.horizon() == 25);
    CHECK(u.g0() == doctest::Approx(t.g0()).epsilon(1e-15));
    CHECK(u.tail_gap() == doctest::Approx(t.tail_gap()).epsilon(1e-12));
    CHECK(u.value_at(make_point({2, 1, 1, 0, 0})) ==
          doctest::Approx(t.value_at(make_point({2, 1, 1, 0, 0}))).epsilon(1e-15));
}

TEST_CASE("hitting probability: degenerate horizons and the one-step law") {
    PointSet target{make_point({1, 0, 0, 0, 0})};
    HittingEstimate zero = hitting_prob_mc(origin(), target, 5, 0, 1000, 3);
    CHECK(zero.p_hat == 0.0);

    HittingEstimate one = hitting_prob_mc(origin(), target, 5, 1, 200000, 3);
    // exactly one of 11 candidates hits
    CHECK(std::abs(one.p_hat - 1.0 / 11.0) < 4.0 * one.stderr_);

    CHECK_THROWS_AS(hitting_prob_mc(origin(), PointSet{origin()}, 5, 10, 10, 3),
                    std::invalid_argument);
}

TEST_CASE("hitting decay exponent close to d-2") {
    // log p against log |z| over starts 4, 8, 16 along an axis
    double lx[3], ly[3];
    const long long rs[3] = {4, 8, 16};
    const std::uint64_t ns[3] = {50000, 200000, 1500000};
    for (int i = 0; i < 3; ++i) {
        HittingEstimate est = hitting_prob_mc(make_point({rs[i], 0, 0, 0, 0}), {origin()}, 5,
                                              3000, ns[i], 7, static_cast<std::uint64_t>(i) << 32);
        REQUIRE(est.p_hat > 0.0);
        lx[i] = std::log(static_cast<double>(rs[i]));
        ly[i] = std::log(est.p_hat);
    }
    double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    double slope = sxy / sxx;
    CHECK(slope < -(5 - 2) + 0.5);
    CHECK(slope > -(5 - 2) - 0.5);
}
