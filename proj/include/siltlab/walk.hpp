#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "siltlab/lattice.hpp"
#include "siltlab/rng.hpp"

namespace siltlab {

// Aperiodic symmetric walk: each step is uniform over the 2d+1 sites of the
// closed l1 ball of radius 1 around the current position (staying included).
struct WalkConfig {
    int dim = 5;
    std::int64_t n_steps = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

struct WalkPath {
    std::vector<Point> positions;  // S_0 .. S_n
    WalkConfig config;
};

inline void validate(const WalkConfig& c) {
    if (c.dim < 1 || c.dim > kMaxDim) throw std::invalid_argument("walk: dimension out of range");
    if (c.n_steps < 0) throw std::invalid_argument("walk: negative step count");
}

// One uniform step over the 2d+1 candidates.
inline Point step(const Point& current, int dim, Rng& rng) {
    std::uint32_t r = rng.bounded(2u * static_cast<std::uint32_t>(dim) + 1u);
    Point next = current;
    if (r != 0) {
        std::uint32_t axis = (r - 1) >> 1;
        next[axis] += (r & 1u) ? 1 : -1;
    }
    return next;
}

// Streams (k, S_k) for k = 0..n_steps without materializing the path.
// The callback may return void, or bool to stop early.
template <class F>
void walk_stream(const WalkConfig& cfg, F&& on_position) {
    validate(cfg);
    Rng rng(cfg.seed, cfg.stream_id);
    Point pos = origin();
    const std::uint32_t card = 2u * static_cast<std::uint32_t>(cfg.dim) + 1u;
    for (std::int64_t k = 0;; ++k) {
        if constexpr (std::is_same_v<decltype(on_position(std::int64_t{}, Point{})), bool>) {
            if (!on_position(k, pos)) return;
        } else {
            on_position(k, pos);
        }
        if (k == cfg.n_steps) return;
        std::uint32_t r = rng.bounded(card);
        if (r != 0) {
            std::uint32_t axis = (r - 1) >> 1;
            pos[axis] += (r & 1u) ? 1 : -1;
        }
    }
}

// Materialized path S_0..S_n; intended for small n (CLI export, tests).
WalkPath simulate(const WalkConfig& cfg, std::int64_t max_positions = (1LL << 27));

}  // namespace siltlab
