#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "siltlab/flat_map.hpp"
#include "siltlab/lattice.hpp"
#include "siltlab/walk.hpp"

namespace siltlab {

// Occupation counts of the first n positions S_0..S_{n-1} of a path
// (the convention used everywhere in this project: the field of a length-n
// prefix excludes S_n). Sparse, keyed by site.
class LocalTimeField {
  public:
    explicit LocalTimeField(int dim = 1) : dim_(dim), counts_(dim) {}

    // Adds one visit, returns the count the site had before the increment.
    std::int64_t add(const Point& p) {
        ++elapsed_;
        return counts_.increment(p);
    }

    std::int64_t count(const Point& p) const { return counts_.count(p); }

    std::int64_t elapsed() const { return elapsed_; }
    int dim() const { return dim_; }
    std::size_t support_size() const { return counts_.size(); }

    // f(site, count) over the support, unspecified order
    template <class F>
    void for_each(F&& f) const {
        counts_.for_each(f);
    }

    // Cross-replica merge; count addition is associative.
    void merge(const LocalTimeField& other);

    std::string to_csv() const;                        // x_1,..,x_d,count rows
    static LocalTimeField from_csv(const std::string& text, int dim);

  private:
    int dim_;
    std::int64_t elapsed_ = 0;
    FlatCountMap counts_;
};

// b_n pairs, ||l_n||_2^2 and the exact identity between them.
struct IntersectionStats {
    std::int64_t b_n = 0;
    std::int64_t norm2_sq = 0;
    std::int64_t n = 0;
    bool identity_holds() const { return norm2_sq == 2 * b_n + n; }
};

LocalTimeField accumulate(const WalkPath& path);
LocalTimeField accumulate_walk(const WalkConfig& cfg);  // streaming, no stored path

IntersectionStats intersection_stats(const LocalTimeField& field);

// Online self-intersection counter: feed S_0, S_1, ... in time order; after
// consuming S_{k} the value equals B_{k+1} of the prefix.
class IncrementalB {
  public:
    explicit IncrementalB(int dim = 1) : field_(dim) {}
    void consume(const Point& p) { b_ += field_.add(p); }
    std::int64_t value() const { return b_; }
    const LocalTimeField& field() const { return field_; }

  private:
    LocalTimeField field_;
    std::int64_t b_ = 0;
};

// (sum counts^q)^{1/q}; exact integer fast paths for q = 1, 2, compensated
// summation otherwise.
double q_norm(const LocalTimeField& field, double q);

enum class LevelSetKind { Window, Range, Threshold };

// Window:    xi/A <= count < A*xi            (parameters A, xi)
// Range:     n^{1/2-eps0} <= count <= n^{1/2+eps0}   (parameter eps0, n from field)
// Threshold: count >= threshold
struct LevelSetSpec {
    LevelSetKind kind = LevelSetKind::Threshold;
    double A = 2.0;
    double xi = 1.0;
    double eps0 = 0.1;
    double threshold = 1.0;
};

void validate(const LevelSetSpec& spec);
PointSet level_set(const LocalTimeField& field, const LevelSetSpec& spec);

// q-norm restricted to the given sites.
double restricted_q_norm(const LocalTimeField& field, const PointSet& sites, double q);

}  // namespace siltlab
