#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siltlab/lattice.hpp"

namespace siltlab {

// Partition of a finite site set at scale L. Distinct blocks C, C' satisfy
//   dist(C, C') >= 4 * max(diam C, diam C', L)
// and every block has diameter at most (5|set|)^{|set|} * L.
struct ClusterPartition {
    int dim = 1;
    std::int64_t scale = 1;           // L
    std::vector<PointSet> clusters;   // each sorted; list sorted by first site
    PointSet source;                  // the input set

    std::int64_t diam(std::size_t i) const { return set_diam(clusters[i], dim); }
    std::string to_json() const;
    static ClusterPartition from_json(const std::string& text);
};

// Bootstrap construction: level-0 links sites within 4L, later rounds link
// blocks within 4*max(diam, diam, L) of each other, until the block count
// stops decreasing. Terminates in at most |points| rounds.
ClusterPartition partition(const PointSet& points, std::int64_t scale, int dim);

// true iff dist(z, C) <= max(L, diam C). For blocks of a valid partition the
// shell meets the source set exactly in C.
bool shell_membership(const ClusterPartition& part, std::size_t cluster_index, const Point& z);

struct TransformRecord {
    bool moved = false;
    std::size_t anchor_index = 0;   // C_0, the block the moved one lands next to
    std::size_t moved_index = 0;    // C_1, the translated block
    Point shift{};                  // u, componentwise integer part
    std::int64_t gap = 0;           // dist(C_0,T(C_1)) - diam C_0 - diam T(C_1)
};

// Translates the smaller-diameter block of the closest pair next to the other
// one. The translation vector is (x0-x1)(1 - (diam0+diam1)/|x0-x1|) rounded
// toward zero, with a one-unit offset when both blocks are singletons so the
// sites stay distinct. Every other block is left untouched. Single-block
// input returns the partition unchanged with record.moved = false.
std::pair<ClusterPartition, TransformRecord> transform(const ClusterPartition& part);

struct IterationLog {
    std::vector<TransformRecord> steps;
    std::vector<std::size_t> cluster_counts;  // before each step, then final
};

// Alternates transform and re-partition until a single block remains.
std::pair<PointSet, IterationLog> iterate_to_single(const PointSet& points, std::int64_t scale,
                                                    int dim);

}  // namespace siltlab
