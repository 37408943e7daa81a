#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siltlab/lattice.hpp"
#include "siltlab/rare_events.hpp"
#include "siltlab/walk.hpp"

namespace siltlab {

// Heavy-tailed scenery: i.i.d. marginals with exponential-power density
// proportional to exp(-c_alpha |t|^alpha), symmetric and unimodal with exact
// stretched-exponential tail exponent alpha. The field is lazy: eta(z) is a
// pure function of (seed, z), so the infinite scenery stays consistent no
// matter how sites are queried.
struct SceneryConfig {
    double alpha = 2.0;
    double c_alpha = 1.0;
    std::uint64_t seed = 0;
};

void validate(const SceneryConfig& cfg);
double sample_eta(const SceneryConfig& cfg, const Point& z);

// k-th absolute moment of the scenery marginal by quadrature (oracle-grade).
double eta_abs_moment(const SceneryConfig& cfg, int k);

struct GammaValue {
    double value = 0.0;
    double quad_error = 0.0;
};

// log E[exp(x eta)] by shifted quadrature; exact tail handling for any
// alpha > 1 since the integrand exponent x t - c t^alpha is eventually
// concave-dominant.
GammaValue gamma_log_laplace(const SceneryConfig& cfg, double x);

struct RwrsParams {
    double alpha = 0.0, beta = 0.0;
    double zeta = 0.0;        // alpha*beta/(alpha+1)
    double b = 0.0;           // beta/(alpha+1)
    double alpha_star = 0.0;  // conjugate exponent
    bool region2 = false;
};

RwrsParams exponent_table(double alpha, double beta, int d);

struct RwrsValue {
    double inner_product = 0.0;  // sum over sites of eta(z) l_n(z)
    double path_sum = 0.0;       // eta(S_0) + ... + eta(S_{n-1})
};

// Both routes are accumulated in double-double arithmetic, so the rounded
// results agree bitwise.
RwrsValue rwrs_value(const WalkConfig& walk, const SceneryConfig& scenery, std::int64_t n);

enum class MdSampler { Naive, Importance };

struct MdOptions {
    std::uint64_t samples = 20000;
    std::uint64_t seed = 1;
    std::uint64_t stream_base = 0;
    MdSampler sampler = MdSampler::Naive;
    double q_stay = 0.5;        // importance only
    double window_exponent = 0.0;  // tilted steps: floor(n^zeta) scaled; 0 = zeta from params
    double level_eps = 0.05;    // epsilon for the level-set diagnostics
};

struct MdPoint {
    std::int64_t n = 0;
    double xi = 0.0;
    double p_hat = 0.0, stderr_ = 0.0, log_p = 0.0;
    double normalized_rate = 0.0;  // -log p / n^zeta
    double ess = 0.0;
    bool censored = false;
    // mean scenery-weighted mass on the high / middle / low level sets
    double part_high = 0.0, part_mid = 0.0, part_low = 0.0;
};

// P( <eta, l_n> >= xi n^beta ) over a grid of n. Scenery fields are drawn
// independently per replica (annealed law).
std::vector<MdPoint> md_scan(int d, const SceneryConfig& scenery, const RwrsParams& params,
                             double xi, const std::vector<std::int64_t>& n_grid,
                             const MdOptions& opt);

std::string md_points_csv(const std::vector<MdPoint>& points, const RwrsParams& params, int d);

}  // namespace siltlab
