#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "siltlab/clusters.hpp"
#include "siltlab/rng.hpp"

using namespace siltlab;

namespace {

PointSet random_set(Rng& rng, int dim, int max_size, std::int64_t coord_range) {
    int size = 1 + static_cast<int>(rng.bounded(static_cast<std::uint32_t>(max_size)));
    PointSet out;
    for (int i = 0; i < size; ++i) {
        Point p{};
        for (int k = 0; k < dim; ++k)
            p[k] = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint32_t>(
                       2 * coord_range + 1))) -
                   coord_range;
        out.push_back(p);
    }
    return out;
}

double diam_bound(std::size_t set_size, std::int64_t scale) {
    return std::pow(5.0 * static_cast<double>(set_size), static_cast<double>(set_size)) *
           static_cast<double>(scale);
}

void check_partition_invariants(const ClusterPartition& part) {
    // blocks partition the source
    std::size_t total = 0;
    for (const auto& c : part.clusters) total += c.size();
    CHECK(total == part.source.size());
    // pairwise separation and the diameter bound
    for (std::size_t i = 0; i < part.clusters.size(); ++i) {
        CHECK(static_cast<double>(part.diam(i)) <=
              diam_bound(part.source.size(), part.scale));
        for (std::size_t j = i + 1; j < part.clusters.size(); ++j) {
            std::int64_t d = set_dist(part.clusters[i], part.clusters[j], part.dim);
            std::int64_t need = 4 * std::max({part.diam(i), part.diam(j), part.scale});
            CHECK(d >= need);
        }
    }
}

}  // namespace

TEST_CASE("two nearby sites form one block") {
    PointSet pts{origin(), make_point({1, 0, 0, 0, 0})};
    ClusterPartition part = partition(pts, 4, 5);
    CHECK(part.clusters.size() == 1);
}

TEST_CASE("two far sites stay separate with certified separation") {
    PointSet pts{origin(), make_point({100, 0, 0, 0, 0})};
    ClusterPartition part = partition(pts, 4, 5);
    REQUIRE(part.clusters.size() == 2);
    CHECK(set_dist(part.clusters[0], part.clusters[1], 5) == 100);
    CHECK(part.diam(0) == 0);
    CHECK(part.diam(1) == 0);
}

TEST_CASE("empty input and bad scale are rejected") {
    CHECK_THROWS_AS(partition({}, 4, 5), std::invalid_argument);
    CHECK_THROWS_AS(partition({origin()}, 0, 5), std::invalid_argument);
}

TEST_CASE("random sets satisfy the partition invariants") {
    Rng rng(101, 0);
    for (int trial = 0; trial < 300; ++trial) {
        std::int64_t scale = (trial % 2 == 0) ? 4 : 16;
        PointSet pts = random_set(rng, 5, 12, 1000000);
        ClusterPartition part = partition(pts, scale, 5);
        check_partition_invariants(part);
    }
}

TEST_CASE("shell membership") {
    SUBCASE("a block's own sites are in its shell") {
        Rng rng(7, 0);
        PointSet pts = random_set(rng, 5, 8, 1000);
        ClusterPartition part = partition(pts, 4, 5);
        for (std::size_t i = 0; i < part.clusters.size(); ++i)
            for (const auto& z : part.clusters[i]) CHECK(shell_membership(part, i, z));
    }
    SUBCASE("singleton shell at scale 4 excludes distance 5") {
        ClusterPartition part = partition({origin(), make_point({100, 0, 0, 0, 0})}, 4, 5);
        CHECK_FALSE(shell_membership(part, 0, make_point({5, 0, 0, 0, 0})));
        CHECK(shell_membership(part, 0, make_point({4, 0, 0, 0, 0})));
    }
    SUBCASE("shell meets the source exactly in the block") {
        Rng rng(8, 0);
        for (int trial = 0; trial < 100; ++trial) {
            PointSet pts = random_set(rng, 5, 10, 100000);
            ClusterPartition part = partition(pts, 4, 5);
            for (std::size_t i = 0; i < part.clusters.size(); ++i) {
                for (const auto& z : part.source) {
                    bool in_block = std::binary_search(part.clusters[i].begin(),
                                                       part.clusters[i].end(), z);
                    CHECK(shell_membership(part, i, z) == in_block);
                }
            }
        }
    }
}

TEST_CASE("transform: two singletons land one unit apart") {
    ClusterPartition part = partition({origin(), make_point({10, 0, 0, 0, 0})}, 1, 5);
    REQUIRE(part.clusters.size() == 2);
    auto [moved, rec] = transform(part);
    REQUIRE(rec.moved);
    std::int64_t d = set_dist(moved.clusters[rec.anchor_index],
                              moved.clusters[rec.moved_index], 5);
    CHECK(d >= 1);
    CHECK(d <= 1 + 5);
    CHECK(rec.gap == d);  // degenerate diameters
}

TEST_CASE("transform: single block returns unchanged") {
    ClusterPartition part = partition({origin()}, 4, 5);
    auto [moved, rec] = transform(part);
    CHECK_FALSE(rec.moved);
    CHECK(moved.clusters == part.clusters);
}

TEST_CASE("transform invariants on random sets") {
    Rng rng(2029, 0);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::int64_t scale = (trial % 2 == 0) ? 4 : 16;
        PointSet pts = random_set(rng, 5, 12, 1000000);
        ClusterPartition part = partition(pts, scale, 5);
        if (part.clusters.size() < 2) continue;
        ++checked;
        auto [moved, rec] = transform(part);
        REQUIRE(rec.moved);

        // gap within [0, 2d]
        CHECK(rec.gap >= 0);
        CHECK(rec.gap <= 2 * 5);

        // moved block is an exact translate
        const PointSet& before = part.clusters[rec.moved_index];
        const PointSet& after = moved.clusters[rec.moved_index];
        REQUIRE(before.size() == after.size());
        for (std::size_t i = 0; i < before.size(); ++i)
            CHECK(after[i] == add(before[i], rec.shift));

        for (std::size_t i = 0; i < part.clusters.size(); ++i) {
            if (i == rec.moved_index) continue;
            // spectators bitwise unchanged
            CHECK(moved.clusters[i] == part.clusters[i]);
            if (i == rec.anchor_index) continue;
            // spectators keep factor-2 proximity and diameter separation
            std::int64_t before_d = set_dist(part.clusters[i], before, 5);
            std::int64_t after_d = set_dist(moved.clusters[i], after, 5);
            CHECK(after_d <= 2 * before_d);
            CHECK(after_d >= part.diam(i) + set_diam(after, 5));
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("iterate to a single block") {
    SUBCASE("already single") {
        auto [final_set, log] = iterate_to_single({origin(), make_point({1, 0, 0, 0, 0})}, 4, 5);
        CHECK(log.steps.empty());
        CHECK(final_set.size() == 2);
    }
    SUBCASE("well separated singletons need at most k-1 moves") {
        Rng rng(55, 0);
        for (int trial = 0; trial < 50; ++trial) {
            PointSet pts = random_set(rng, 5, 8, 1000000);
            ClusterPartition part = partition(pts, 4, 5);
            std::size_t k = part.clusters.size();
            auto [final_set, log] = iterate_to_single(pts, 4, 5);
            CHECK(log.steps.size() <= (k > 0 ? k - 1 : 0));
            CHECK(final_set.size() == part.source.size());
            // strict decrease each round
            for (std::size_t i = 1; i < log.cluster_counts.size(); ++i)
                CHECK(log.cluster_counts[i] < log.cluster_counts[i - 1]);
        }
    }
    SUBCASE("deterministic replay") {
        Rng rng(56, 0);
        PointSet pts = random_set(rng, 5, 10, 500000);
        auto [a, la] = iterate_to_single(pts, 16, 5);
        auto [b, lb] = iterate_to_single(pts, 16, 5);
        CHECK(a == b);
        CHECK(la.steps.size() == lb.steps.size());
    }
}

TEST_CASE("partition json round trip") {
    Rng rng(77, 0);
    PointSet pts = random_set(rng, 3, 6, 1000);
    ClusterPartition part = partition(pts, 4, 3);
    ClusterPartition back = ClusterPartition::from_json(part.to_json());
    CHECK(back.dim == part.dim);
    CHECK(back.scale == part.scale);
    CHECK(back.clusters == part.clusters);
    CHECK(back.source == part.source);
}
