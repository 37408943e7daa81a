#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "siltlab/lattice.hpp"
#include "siltlab/local_time.hpp"

namespace siltlab {

// One tail-probability record. All estimators work on the centered event
//   ||l_n||_2^2 >= baseline + n*xi,
// the baseline being a pilot estimate of E||l_n||_2^2 unless overridden.
struct TailEstimate {
    std::string method;  // naive | importance | certificate
    int d = 0;
    std::int64_t n = 0;
    double xi = 0.0;
    double p_hat = 0.0;
    double stderr_ = 0.0;
    double log_p = 0.0;  // -inf when no mass was seen
    double normalized_rate = 0.0;  // -log_p / sqrt(n*xi), 0 when xi <= 0
    double ess = 0.0;
    double baseline = 0.0;
    bool censored = false;    // zero hits; p_hat carries the rule-of-three upper bound
    bool infeasible = false;  // certificate only: forced run does not fit in n

    // certificate components: log_p = cert_log_forced + log(cert_tail_p)
    std::int64_t cert_r = 0;
    double cert_log_forced = 0.0;  // -(r-1) log(2d+1), exact up to rounding of log
    double cert_tail_p = 0.0;
    double cert_tail_stderr = 0.0;

    static std::string csv_header();
    std::string csv_row() const;
};

struct TailOptions {
    std::uint64_t samples = 100000;
    std::uint64_t pilot_samples = 0;  // 0: same as samples
    std::uint64_t seed = 1;
    std::uint64_t stream_base = 0;
    std::optional<double> baseline_override;  // skip the pilot batch
};

TailEstimate naive_tail(int d, std::int64_t n, double xi, const TailOptions& opt);

struct ImportanceOptions : TailOptions {
    double q_stay = 0.5;        // extra mass toward re-hitting the confinement set
    double alpha_window = 2.0;  // tilted steps: floor(alpha_window * sqrt(n))
    PointSet confinement;       // defaults to {origin}
};

// One-parameter mixture proposal with exact one-step likelihood ratios,
// accumulated in the log domain. Unbiased for the same event as naive_tail.
TailEstimate importance_tail(int d, std::int64_t n, double xi, const ImportanceOptions& opt);

struct CertificateOptions {
    std::uint64_t pilot_samples = 20000;
    std::uint64_t seed = 1;
    std::uint64_t stream_base = 0;
    std::optional<double> baseline_override;    // E||l_n||_2^2 if known exactly
    std::optional<double> mean_rate_override;   // gamma substitute for choosing r
};

// Analytic lower bound: hold the walk at the origin for r steps, r the
// smallest integer with r^2 >= n*xi + r*gamma_hat, then let an independent
// (n-r)-walk pick up the remaining excess. The stay costs exactly
// (2d+1)^{-(r-1)}; the remainder probability is estimated by Monte Carlo.
TailEstimate certificate_lower_bound(int d, std::int64_t n, double xi,
                                     const CertificateOptions& opt);

struct RateScan {
    double slope = 0.0;  // through-origin fit of -log p against sqrt(n*xi)
    std::vector<double> residuals;
    bool within_bracket = false;  // 0 < slope <= (1+tol) log(2d+1)
};

RateScan rate_scan(const std::vector<TailEstimate>& estimates, int d, double tol = 0.1);

// ---- pinned events ----

struct PinnedEventSpec {
    int d = 5;
    std::int64_t n = 0;
    double xi = 0.0;
    double q = 2.0;
    PointSet lambda;  // must contain the origin
};

void validate(const PinnedEventSpec& spec);

struct PinnedEstimate {
    PinnedEventSpec spec;
    double p_hat = 0.0;
    double log_p = 0.0;
    double a_n = 0.0;        // -log p_hat
    double a_stderr = 0.0;   // delta-method error on a_n
    double ess = 0.0;
    std::uint64_t samples = 0;
};

struct PinnedOptions {
    std::uint64_t samples = 200000;
    std::uint64_t seed = 1;
    std::uint64_t stream_base = 0;
    double tilt = 1.0;    // bridge pull toward the origin; 0 = plain Monte Carlo
    double q_stay = 0.0;  // extra mass toward re-hitting lambda
};

// Estimates P( ||1_Lambda l_n||_q >= n*xi, S_n = 0 ). The proposal tilts each
// step toward the origin with strength proportional to tilt * x / (n-k)
// (a bridge pull) and mixes in q_stay mass on candidates inside lambda; the
// weights are exact products of one-step ratios, so the estimator is
// unbiased for any tilt.
PinnedEstimate pinned_tail(const PinnedEventSpec& spec, const PinnedOptions& opt);

struct SubadditivityRow {
    std::int64_t n = 0;
    double a_n = 0.0;
    double a_2n = 0.0;
    double defect = 0.0;        // a_2n - 2 a_n
    double combined_err = 0.0;  // err(a_2n) + 2 err(a_n)
    double slack = 0.0;         // 2 log n, the polynomial prefactor allowance
    bool flagged = false;       // defect beyond 3*(err + slack)
};

struct SubadditivityReport {
    std::vector<PinnedEstimate> estimates;
    std::vector<SubadditivityRow> rows;
    std::string csv() const;
};

// Runs the pinned estimator on each spec and on the doubled horizons, and
// reports a_{2n} - 2 a_n against the error/slack allowance.
SubadditivityReport subadditivity_probe(const std::vector<PinnedEventSpec>& specs,
                                        const PinnedOptions& opt);

// ---- mutual intersections of two independent walks ----

struct MutualStats {
    double q = 2.0;
    std::int64_t horizon = 0;
    double filter_eps = 0.0;  // 0: no filtered sum
    std::vector<double> zeta;       // per replica pair
    std::vector<double> filtered;   // same length when filter_eps > 0
    double mean = 0.0, stderr_ = 0.0;
    double moments[3] = {0, 0, 0};  // orders 1..3
};

MutualStats zeta_q(int d, double q, std::int64_t horizon, std::uint64_t pairs, std::uint64_t seed,
                   double filter_eps = 0.0, std::uint64_t stream_base = 0);

struct MomentGrowthReport {
    double q = 2.0;
    int max_order = 0;
    std::vector<double> moments;   // sample moments 1..max_order
    std::vector<double> fitted_c;  // (m_k / (k!)^q)^{1/k}
    bool bounded = false;          // fitted_c stays within the pinned envelope
};

MomentGrowthReport moment_growth_check(const MutualStats& stats, int max_order);

std::string tail_estimates_csv(const std::vector<TailEstimate>& rows);

}  // namespace siltlab
