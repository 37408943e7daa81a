#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <vector>

#include "siltlab/rng.hpp"

namespace siltlab {

inline constexpr int kMaxDim = 8;

// Lattice site. Coordinates are 64-bit; lanes beyond the active dimension are
// kept at zero so equality and hashing can run over the full array.
using Point = std::array<std::int64_t, kMaxDim>;

inline Point origin() { return Point{}; }

inline Point make_point(std::initializer_list<std::int64_t> coords) {
    Point p{};
    int i = 0;
    for (auto c : coords) p[i++] = c;
    return p;
}

inline std::int64_t l1_norm(const Point& p, int dim) {
    std::int64_t s = 0;
    for (int i = 0; i < dim; ++i) s += std::abs(p[i]);
    return s;
}

inline std::int64_t l1_dist(const Point& a, const Point& b, int dim) {
    std::int64_t s = 0;
    for (int i = 0; i < dim; ++i) s += std::abs(a[i] - b[i]);
    return s;
}

inline Point add(const Point& a, const Point& b) {
    Point r{};
    for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] + b[i];
    return r;
}

inline Point sub(const Point& a, const Point& b) {
    Point r{};
    for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] - b[i];
    return r;
}

inline Point negate(const Point& a) {
    Point r{};
    for (int i = 0; i < kMaxDim; ++i) r[i] = -a[i];
    return r;
}

struct PointHash {
    std::size_t operator()(const Point& p) const {
        std::uint64_t h = 0x8b655444a2f0f1ffULL;
        for (int i = 0; i < kMaxDim; ++i) {
            std::uint64_t s = h ^ static_cast<std::uint64_t>(p[i]);
            h = splitmix64(s);
        }
        return static_cast<std::size_t>(h);
    }
};

using PointSet = std::vector<Point>;

// min over pairs, l1 metric
std::int64_t set_dist(const PointSet& a, const PointSet& b, int dim);
// max over pairs
std::int64_t set_diam(const PointSet& a, int dim);
std::int64_t point_set_dist(const Point& z, const PointSet& a, int dim);

}  // namespace siltlab
