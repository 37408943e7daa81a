#include "siltlab/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace siltlab {

namespace {

// Union-find over block indices.
struct Dsu {
    std::vector<std::size_t> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::vector<PointSet> merge_round(const std::vector<PointSet>& blocks, std::int64_t scale,
                                  int dim) {
    const std::size_t n = blocks.size();
    std::vector<std::int64_t> diams(n);
    for (std::size_t i = 0; i < n; ++i) diams[i] = set_diam(blocks[i], dim);
    Dsu dsu(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::int64_t link = 4 * std::max({diams[i], diams[j], scale});
            if (set_dist(blocks[i], blocks[j], dim) <= link) dsu.unite(i, j);
        }
    }
    std::vector<PointSet> merged(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& dst = merged[dsu.find(i)];
        dst.insert(dst.end(), blocks[i].begin(), blocks[i].end());
    }
    std::vector<PointSet> out;
    for (auto& b : merged)
        if (!b.empty()) out.push_back(std::move(b));
    return out;
}

void normalize(ClusterPartition& part) {
    for (auto& c : part.clusters) std::sort(c.begin(), c.end());
    std::sort(part.clusters.begin(), part.clusters.end(),
              [](const PointSet& a, const PointSet& b) { return a.front() < b.front(); });
}

}  // namespace

ClusterPartition partition(const PointSet& points, std::int64_t scale, int dim) {
    if (points.empty()) throw std::invalid_argument("partition: empty input");
    if (scale < 1) throw std::invalid_argument("partition: scale must be >= 1");
    PointSet distinct = points;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    // level 0: plain distance links at 4L
    std::vector<PointSet> blocks;
    {
        Dsu dsu(distinct.size());
        for (std::size_t i = 0; i < distinct.size(); ++i)
            for (std::size_t j = i + 1; j < distinct.size(); ++j)
                if (l1_dist(distinct[i], distinct[j], dim) <= 4 * scale) dsu.unite(i, j);
        std::vector<PointSet> grouped(distinct.size());
        for (std::size_t i = 0; i < distinct.size(); ++i)
            grouped[dsu.find(i)].push_back(distinct[i]);
        for (auto& g : grouped)
            if (!g.empty()) blocks.push_back(std::move(g));
    }
    // later levels: merge until the block count is stable
    for (;;) {
        auto next = merge_round(blocks, scale, dim);
        if (next.size() == blocks.size()) break;
        blocks = std::move(next);
    }

    ClusterPartition part;
    part.dim = dim;
    part.scale = scale;
    part.source = distinct;
    part.clusters = std::move(blocks);
    normalize(part);
    return part;
}

bool shell_membership(const ClusterPartition& part, std::size_t cluster_index, const Point& z) {
    const PointSet& c = part.clusters.at(cluster_index);
    std::int64_t reach = std::max(part.scale, set_diam(c, part.dim));
    return point_set_dist(z, c, part.dim) <= reach;
}

std::pair<ClusterPartition, TransformRecord> transform(const ClusterPartition& part) {
    TransformRecord rec;
    if (part.clusters.size() < 2) return {part, rec};

    const int dim = part.dim;
    const std::size_t n = part.clusters.size();
    std::vector<std::int64_t> diams(n);
    for (std::size_t i = 0; i < n; ++i) diams[i] = part.diam(i);

    // closest pair, ties by index pair
    std::size_t bi = 0, bj = 1;
    std::int64_t best = set_dist(part.clusters[0], part.clusters[1], dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::int64_t d = set_dist(part.clusters[i], part.clusters[j], dim);
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    // the smaller-diameter block moves; ties resolved toward the lower index
    std::size_t moved = (diams[bi] < diams[bj]) ? bi : (diams[bj] < diams[bi]) ? bj : bi;
    std::size_t anchor = (moved == bi) ? bj : bi;

    // anchor sites realizing the pair distance, lexicographic tie-break
    Point x0{}, x1{};
    bool have = false;
    for (const auto& a : part.clusters[anchor]) {
        for (const auto& m : part.clusters[moved]) {
            if (l1_dist(a, m, dim) != best) continue;
            if (!have || std::make_pair(a, m) < std::make_pair(x0, x1)) {
                x0 = a;
                x1 = m;
                have = true;
            }
        }
    }

    const std::int64_t dsum = diams[anchor] + diams[moved];
    Point shift{};
    if (dsum == 0) {
        // two singletons: land one unit short of the anchor so sites stay distinct
        shift = sub(x0, x1);
        int best_axis = 0;
        for (int i = 1; i < dim; ++i)
            if (std::abs(shift[i]) > std::abs(shift[best_axis])) best_axis = i;
        shift[best_axis] -= (shift[best_axis] > 0) ? 1 : -1;
    } else {
        const double factor = 1.0 - static_cast<double>(dsum) / static_cast<double>(best);
        for (int i = 0; i < dim; ++i) {
            double u = static_cast<double>(x0[i] - x1[i]) * factor;
            shift[i] = static_cast<std::int64_t>(std::trunc(u));
        }
    }

    ClusterPartition out = part;
    for (auto& p : out.clusters[moved]) p = add(p, shift);

    if (dsum > 0) {
        // Truncation leaves the translated block short of the anchor by up to
        // one unit per axis. Usually that still lands it inside the linking
        // range of the anchor; when the scale is small relative to the
        // dimension it may not, so finish the move by largest remainder until
        // the pair would merge. Each completion step keeps |shift|_1 within
        // the exact translation length, so the gap never goes negative.
        const std::int64_t link = 4 * std::max({diams[anchor], diams[moved], part.scale});
        const double factor = 1.0 - static_cast<double>(dsum) / static_cast<double>(best);
        while (set_dist(out.clusters[anchor], out.clusters[moved], dim) > link) {
            int axis = -1;
            double best_rem = 0.0;
            for (int i = 0; i < dim; ++i) {
                double exact = static_cast<double>(x0[i] - x1[i]) * factor;
                double rem = std::abs(exact) - std::abs(static_cast<double>(shift[i]));
                if (rem > best_rem) {
                    best_rem = rem;
                    axis = i;
                }
            }
            if (axis < 0) break;  // fully completed; the pair is within D already
            std::int64_t dir = (x0[axis] - x1[axis]) > 0 ? 1 : -1;
            shift[axis] += dir;
            for (auto& p : out.clusters[moved]) p[axis] += dir;
        }
    }
    rec.moved = true;
    rec.anchor_index = anchor;
    rec.moved_index = moved;
    rec.shift = shift;
    rec.gap = set_dist(out.clusters[anchor], out.clusters[moved], dim) - dsum;
    return {out, rec};
}

std::pair<PointSet, IterationLog> iterate_to_single(const PointSet& points, std::int64_t scale,
                                                    int dim) {
    IterationLog log;
    ClusterPartition part = partition(points, scale, dim);
    log.cluster_counts.push_back(part.clusters.size());
    while (part.clusters.size() > 1) {
        auto [moved, rec] = transform(part);
        log.steps.push_back(rec);
        PointSet flat;
        for (const auto& c : moved.clusters) flat.insert(flat.end(), c.begin(), c.end());
        part = partition(flat, scale, dim);
        log.cluster_counts.push_back(part.clusters.size());
    }
    return {part.clusters.front(), log};
}

std::string ClusterPartition::to_json() const {
    nlohmann::json j;
    j["dim"] = dim;
    j["scale"] = scale;
    auto set_to_json = [&](const PointSet& s) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : s) {
            nlohmann::json pt = nlohmann::json::array();
            for (int i = 0; i < dim; ++i) pt.push_back(p[i]);
            arr.push_back(pt);
        }
        return arr;
    };
    j["source"] = set_to_json(source);
    nlohmann::json cl = nlohmann::json::array();
    for (const auto& c : clusters) cl.push_back(set_to_json(c));
    j["clusters"] = cl;
    return j.dump(2);
}

ClusterPartition ClusterPartition::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ClusterPartition part;
    part.dim = j.at("dim").get<int>();
    part.scale = j.at("scale").get<std::int64_t>();
    auto set_from_json = [&](const nlohmann::json& arr) {
        PointSet s;
        for (const auto& pt : arr) {
            Point p{};
            for (int i = 0; i < part.dim; ++i) p[i] = pt.at(i).get<std::int64_t>();
            s.push_back(p);
        }
        return s;
    };
    part.source = set_from_json(j.at("source"));
    for (const auto& c : j.at("clusters")) part.clusters.push_back(set_from_json(c));
    return part;
}

}  // namespace siltlab
