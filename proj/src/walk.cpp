#include "siltlab/walk.hpp"

namespace siltlab {

WalkPath simulate(const WalkConfig& cfg, std::int64_t max_positions) {
    validate(cfg);
    if (cfg.n_steps + 1 > max_positions)
        throw std::length_error("walk: path exceeds the position budget, use walk_stream");
    WalkPath path;
    path.config = cfg;
    path.positions.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);
    walk_stream(cfg, [&](std::int64_t, const Point& p) { path.positions.push_back(p); });
    return path;
}

}  // namespace siltlab
