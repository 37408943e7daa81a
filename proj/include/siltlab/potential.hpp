#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siltlab/lattice.hpp"

namespace siltlab {

// Truncated lattice Green's function of the lazy l1-ball walk:
//   G(z) = sum_{n=0}^{N} p_n(z)
// where p_n is the n-fold kernel iterate restricted to the box [-R,R]^d with
// absorbing boundary (mass leaving the box is dropped, so the table is a
// lower bound on the infinite-volume function).
//
// The kernel, the box and delta_0 are all invariant under coordinate sign
// flips and permutations, so only canonical cells 0 <= c_1 <= ... <= c_d are
// stored: C(R+d, d) cells instead of (2R+1)^d points.
class GreenTable {
  public:
    GreenTable(int dim, int box_radius, std::int64_t horizon,
               std::vector<double> values, double g0_at_half_horizon);

    int dim() const { return dim_; }
    int box_radius() const { return box_radius_; }
    std::int64_t horizon() const { return horizon_; }

    double g0() const { return value_at(origin()); }
    double gamma() const { return 2.0 * g0() - 1.0; }

    // |G_N(0) - G_{N/2}(0)|, a cheap view of how much of the series tail the
    // truncation still misses.
    double tail_gap() const { return g0() - g0_half_; }

    // G at any lattice point; zero outside the box.
    double value_at(const Point& z) const;

    // sum over the whole box of G(z)^2 (canonical cells weighted by orbit
    // size). Requires dim >= 5, where the infinite sum converges.
    double sum_sq() const;

    std::size_t cell_count() const { return values_.size(); }

    std::string to_csv() const;  // canonical cells; header row records d,R,N
    static GreenTable from_csv(const std::string& text);

    // Rank of a canonical (sorted, nonnegative) tuple among all canonical
    // cells of the box; exposed for the builder and tests.
    static std::size_t cell_rank(const std::array<int, kMaxDim>& sorted, int dim, int box_radius);

  private:
    int dim_;
    int box_radius_;
    std::int64_t horizon_;
    double g0_half_;
    std::vector<double> values_;
};

// Runs the stencil sweep. dim must be >= 3 (transient walks only); memory is
// C(R+dim, dim) cells. Threaded internally; the result does not depend on the
// worker count.
GreenTable green_truncated(int dim, int box_radius, std::int64_t horizon,
                           unsigned threads = 0 /* 0 = default */);

struct HittingEstimate {
    double p_hat = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    std::int64_t horizon = 0;
};

// Monte Carlo estimate of P_start(T(target) <= horizon) for a finite target
// set. Truncation at the horizon is part of the estimand.
HittingEstimate hitting_prob_mc(const Point& start, const PointSet& target, int dim,
                                std::int64_t horizon, std::uint64_t samples, std::uint64_t seed,
                                std::uint64_t stream_base = 0);

}  // namespace siltlab
