#include "siltlab/lattice.hpp"

#include <limits>

namespace siltlab {

std::int64_t set_dist(const PointSet& a, const PointSet& b, int dim) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& x : a)
        for (const auto& y : b) best = std::min(best, l1_dist(x, y, dim));
    return best;
}

std::int64_t set_diam(const PointSet& a, int dim) {
    std::int64_t best = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            best = std::max(best, l1_dist(a[i], a[j], dim));
    return best;
}

std::int64_t point_set_dist(const Point& z, const PointSet& a, int dim) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& x : a) best = std::min(best, l1_dist(z, x, dim));
    return best;
}

}  // namespace siltlab
