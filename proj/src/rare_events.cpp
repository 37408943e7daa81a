#include "siltlab/rare_events.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "siltlab/parallel.hpp"
#include "siltlab/rng.hpp"
#include "siltlab/walk.hpp"

namespace siltlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ||l_n||_2^2 of one replica, streaming (2*B + n via the online pair count).
std::int64_t norm2_sq_of_replica(int d, std::int64_t n, std::uint64_t seed,
                                 std::uint64_t stream) {
    WalkConfig cfg{d, n, seed, stream};
    LocalTimeField field(d);
    std::int64_t b = 0;
    walk_stream(cfg, [&](std::int64_t k, const Point& p) {
        if (k < n) b += field.add(p);
    });
    return 2 * b + n;
}

double pilot_mean_norm2(int d, std::int64_t n, std::uint64_t samples, std::uint64_t seed,
                        std::uint64_t stream_base) {
    struct Acc {
        double sum = 0.0;
    };
    Acc total = parallel_fold<Acc>(
        samples, 16, Acc{},
        [&](std::uint64_t i, Acc& acc) {
            acc.sum += static_cast<double>(norm2_sq_of_replica(d, n, seed, stream_base + i));
        },
        [](Acc& a, const Acc& b) { a.sum += b.sum; });
    return total.sum / static_cast<double>(samples);
}

void finish_binomial(TailEstimate& est, std::uint64_t hits, std::uint64_t samples) {
    const double m = static_cast<double>(samples);
    double p = static_cast<double>(hits) / m;
    est.ess = m;
    if (hits == 0) {
        est.censored = true;
        est.p_hat = 3.0 / m;  // rule-of-three upper bound
        est.log_p = kNegInf;
    } else {
        est.p_hat = p;
        est.log_p = std::log(p);
    }
    est.stderr_ = std::sqrt(std::max(p * (1.0 - p), 0.0) / m);
    if (est.xi > 0.0 && std::isfinite(est.log_p))
        est.normalized_rate = -est.log_p / std::sqrt(static_cast<double>(est.n) * est.xi);
}

}  // namespace

std::string TailEstimate::csv_header() {
    return "method,d,n,xi,p_hat,stderr,log_p,normalized_rate,ess,baseline,censored,infeasible,"
           "cert_r,cert_log_forced,cert_tail_p";
}

std::string TailEstimate::csv_row() const {
    std::ostringstream out;
    out << std::setprecision(17);
    out << method << ',' << d << ',' << n << ',' << xi << ',' << p_hat << ',' << stderr_ << ','
        << log_p << ',' << normalized_rate << ',' << ess << ',' << baseline << ','
        << (censored ? 1 : 0) << ',' << (infeasible ? 1 : 0) << ',' << cert_r << ','
        << cert_log_forced << ',' << cert_tail_p;
    return out.str();
}

std::string tail_estimates_csv(const std::vector<TailEstimate>& rows) {
    std::ostringstream out;
    out << TailEstimate::csv_header() << "\n";
    for (const auto& r : rows) out << r.csv_row() << "\n";
    return out.str();
}

TailEstimate naive_tail(int d, std::int64_t n, double xi, const TailOptions& opt) {
    TailEstimate est;
    est.method = "naive";
    est.d = d;
    est.n = n;
    est.xi = xi;
    const std::uint64_t pilot = opt.pilot_samples ? opt.pilot_samples : opt.samples;
    // pilot and main batches use disjoint stream ranges
    est.baseline = opt.baseline_override
                       ? *opt.baseline_override
                       : pilot_mean_norm2(d, n, pilot, opt.seed, opt.stream_base + opt.samples);
    const double threshold = est.baseline + static_cast<double>(n) * xi;
    struct Acc {
        std::uint64_t hits = 0;
    };
    Acc total = parallel_fold<Acc>(
        opt.samples, 16, Acc{},
        [&](std::uint64_t i, Acc& acc) {
            if (static_cast<double>(norm2_sq_of_replica(d, n, opt.seed, opt.stream_base + i)) >=
                threshold)
                ++acc.hits;
        },
        [](Acc& a, const Acc& b) { a.hits += b.hits; });
    finish_binomial(est, total.hits, opt.samples);
    return est;
}

namespace {

// log-domain accumulator for weighted indicators; chunks are merged in index
// order so the result is independent of the worker count.
struct LogAcc {
    double max_log = kNegInf;
    double sum = 0.0;     // sum of exp(log_w - max_log) over event hits
    double sum_sq = 0.0;  // same with 2*(log_w - max_log)
    // all-sample weight sums for the effective sample size
    double w_max = kNegInf;
    double w_sum = 0.0;
    double w_sum_sq = 0.0;
    std::uint64_t hits = 0;

    void add_event(double log_w) {
        ++hits;
        if (log_w > max_log) {
            double shift = std::exp(max_log - log_w);
            sum = sum * shift + 1.0;
            sum_sq = sum_sq * shift * shift + 1.0;
            max_log = log_w;
        } else {
            sum += std::exp(log_w - max_log);
            sum_sq += std::exp(2.0 * (log_w - max_log));
        }
    }
    void add_weight(double log_w) {
        if (log_w > w_max) {
            double shift = std::exp(w_max - log_w);
            w_sum = w_sum * shift + 1.0;
            w_sum_sq = w_sum_sq * shift * shift + 1.0;
            w_max = log_w;
        } else {
            w_sum += std::exp(log_w - w_max);
            w_sum_sq += std::exp(2.0 * (log_w - w_max));
        }
    }
    void merge(const LogAcc& o) {
        hits += o.hits;
        if (o.max_log > kNegInf) {
            if (o.max_log > max_log) {
                double shift = (max_log > kNegInf) ? std::exp(max_log - o.max_log) : 0.0;
                sum = sum * shift + o.sum;
                sum_sq = sum_sq * shift * shift + o.sum_sq;
                max_log = o.max_log;
            } else {
                double shift = std::exp(o.max_log - max_log);
                sum += o.sum * shift;
                sum_sq += o.sum_sq * shift * shift;
            }
        }
        if (o.w_max > kNegInf) {
            if (o.w_max > w_max) {
                double shift = (w_max > kNegInf) ? std::exp(w_max - o.w_max) : 0.0;
                w_sum = w_sum * shift + o.w_sum;
                w_sum_sq = w_sum_sq * shift * shift + o.w_sum_sq;
                w_max = o.w_max;
            } else {
                double shift = std::exp(o.w_max - w_max);
                w_sum += o.w_sum * shift;
                w_sum_sq += o.w_sum_sq * shift * shift;
            }
        }
    }
};

void finish_weighted(TailEstimate& est, const LogAcc& acc, std::uint64_t samples) {
    const double m = static_cast<double>(samples);
    if (acc.hits == 0) {
        est.censored = true;
        est.p_hat = 3.0 / m;
        est.log_p = kNegInf;
        est.stderr_ = 0.0;
        est.ess = 0.0;
        return;
    }
    // p = e^{max} * sum / m
    est.log_p = acc.max_log + std::log(acc.sum / m);
    est.p_hat = std::exp(est.log_p);
    // var(w 1) = E[w^2 1] - p^2
    double log_m2 = 2.0 * acc.max_log + std::log(acc.sum_sq / m);
    double var = std::exp(log_m2) - est.p_hat * est.p_hat;
    est.stderr_ = std::sqrt(std::max(var, 0.0) / m);
    if (acc.w_sum_sq > 0.0)
        est.ess = (acc.w_sum * acc.w_sum) / acc.w_sum_sq;
    if (est.xi > 0.0 && std::isfinite(est.log_p))
        est.normalized_rate = -est.log_p / std::sqrt(static_cast<double>(est.n) * est.xi);
}

}  // namespace

TailEstimate importance_tail(int d, std::int64_t n, double xi, const ImportanceOptions& opt) {
    if (opt.q_stay < 0.0 || opt.q_stay >= 1.0)
        throw std::invalid_argument("importance_tail: q_stay must be in [0,1)");
    TailEstimate est;
    est.method = "importance";
    est.d = d;
    est.n = n;
    est.xi = xi;
    const std::uint64_t pilot = opt.pilot_samples ? opt.pilot_samples : opt.samples;
    est.baseline = opt.baseline_override
                       ? *opt.baseline_override
                       : pilot_mean_norm2(d, n, pilot, opt.seed, opt.stream_base + opt.samples);
    const double threshold = est.baseline + static_cast<double>(n) * xi;

    PointSet target = opt.confinement.empty() ? PointSet{origin()} : opt.confinement;
    std::unordered_map<Point, char, PointHash> in_target;
    for (const auto& p : target) in_target[p] = 1;
    const std::int64_t window =
        static_cast<std::int64_t>(opt.alpha_window * std::sqrt(static_cast<double>(n)));
    const std::uint32_t card = 2u * static_cast<std::uint32_t>(d) + 1u;
    const double base_p = 1.0 / static_cast<double>(card);

    LogAcc total = parallel_fold<LogAcc>(
        opt.samples, 16, LogAcc{},
        [&](std::uint64_t i, LogAcc& acc) {
            Rng rng(opt.seed, opt.stream_base + i);
            LocalTimeField field(d);
            std::int64_t b = 0;
            Point pos = origin();
            double log_w = 0.0;
            std::array<Point, 17> cand;
            for (std::int64_t k = 0; k < n; ++k) {
                b += field.add(pos);
                if (k < window) {
                    // mixture proposal: uniform plus q_stay spread over the
                    // candidates inside the confinement set
                    int n_hits = 0;
                    bool hit[17] = {};
                    for (std::uint32_t r = 0; r < card; ++r) {
                        Point c = pos;
                        if (r != 0) {
                            std::uint32_t axis = (r - 1) >> 1;
                            c[axis] += (r & 1u) ? 1 : -1;
                        }
                        cand[r] = c;
                        hit[r] = in_target.count(c) > 0;
                        if (hit[r]) ++n_hits;
                    }
                    const double boost =
                        (n_hits > 0) ? opt.q_stay / static_cast<double>(n_hits) : 0.0;
                    const double mix = (n_hits > 0) ? 1.0 - opt.q_stay : 1.0;
                    double u = rng.uniform();
                    std::uint32_t pick = card - 1;
                    double q_pick = base_p;
                    double cum = 0.0;
                    for (std::uint32_t r = 0; r < card; ++r) {
                        double q = mix * base_p + (hit[r] ? boost : 0.0);
                        cum += q;
                        if (u < cum || r + 1 == card) {
                            pick = r;
                            q_pick = q;
                            break;
                        }
                    }
                    log_w += std::log(base_p) - std::log(q_pick);
                    pos = cand[pick];
                } else {
                    std::uint32_t r = rng.bounded(card);
                    if (r != 0) {
                        std::uint32_t axis = (r - 1) >> 1;
                        pos[axis] += (r & 1u) ? 1 : -1;
                    }
                }
            }
            std::int64_t norm2 = 2 * b + n;
            acc.add_weight(log_w);
            if (static_cast<double>(norm2) >= threshold) acc.add_event(log_w);
        },
        [](LogAcc& a, const LogAcc& b) { a.merge(b); });
    finish_weighted(est, total, opt.samples);
    return est;
}

TailEstimate certificate_lower_bound(int d, std::int64_t n, double xi,
                                     const CertificateOptions& opt) {
    TailEstimate est;
    est.method = "certificate";
    est.d = d;
    est.n = n;
    est.xi = xi;
    est.baseline = opt.baseline_override ? *opt.baseline_override
                                         : pilot_mean_norm2(d, n, opt.pilot_samples, opt.seed,
                                                            opt.stream_base + 2 * opt.pilot_samples);
    const double mean_rate = opt.mean_rate_override
                                 ? *opt.mean_rate_override
                                 : est.baseline / static_cast<double>(n);
    const double nxi = static_cast<double>(n) * xi;
    // smallest r with r^2 - r*mean_rate >= n*xi
    std::int64_t r = static_cast<std::int64_t>(
        std::ceil((mean_rate + std::sqrt(mean_rate * mean_rate + 4.0 * std::max(nxi, 0.0))) / 2.0));
    if (r < 1) r = 1;
    while (static_cast<double>(r) * static_cast<double>(r) <
           nxi + static_cast<double>(r) * mean_rate)
        ++r;
    while (r > 1 && static_cast<double>(r - 1) * static_cast<double>(r - 1) >=
                        nxi + static_cast<double>(r - 1) * mean_rate)
        --r;
    est.cert_r = r;
    if (r >= n) {
        est.infeasible = true;
        est.p_hat = 0.0;
        est.log_p = kNegInf;
        return est;
    }
    est.cert_log_forced =
        -static_cast<double>(r - 1) * std::log(static_cast<double>(2 * d + 1));
    // tail batch: an independent (n-r)-walk must reach the leftover excess
    const double tail_threshold =
        est.baseline + nxi - static_cast<double>(r) * static_cast<double>(r);
    struct Acc {
        std::uint64_t hits = 0;
    };
    Acc tail = parallel_fold<Acc>(
        opt.pilot_samples, 16, Acc{},
        [&](std::uint64_t i, Acc& acc) {
            if (static_cast<double>(norm2_sq_of_replica(d, n - r, opt.seed,
                                                        opt.stream_base + i)) >= tail_threshold)
                ++acc.hits;
        },
        [](Acc& a, const Acc& b) { a.hits += b.hits; });
    const double m = static_cast<double>(opt.pilot_samples);
    est.cert_tail_p = static_cast<double>(tail.hits) / m;
    est.cert_tail_stderr =
        std::sqrt(std::max(est.cert_tail_p * (1.0 - est.cert_tail_p), 0.0) / m);
    est.ess = m;
    if (tail.hits == 0) {
        est.censored = true;
        est.log_p = kNegInf;
        est.p_hat = 0.0;
    } else {
        est.log_p = est.cert_log_forced + std::log(est.cert_tail_p);
        est.p_hat = std::exp(est.log_p);
        est.stderr_ = std::exp(est.cert_log_forced) * est.cert_tail_stderr;
    }
    if (xi > 0.0 && std::isfinite(est.log_p))
        est.normalized_rate = -est.log_p / std::sqrt(nxi);
    return est;
}

RateScan rate_scan(const std::vector<TailEstimate>& estimates, int d, double tol) {
    RateScan scan;
    double sxy = 0.0, sxx = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : estimates) {
        if (!std::isfinite(e.log_p) || e.xi <= 0.0) continue;
        double x = std::sqrt(static_cast<double>(e.n) * e.xi);
        double y = -e.log_p;
        pts.emplace_back(x, y);
        sxy += x * y;
        sxx += x * x;
    }
    if (pts.empty()) throw std::invalid_argument("rate_scan: no finite estimates");
    scan.slope = sxy / sxx;
    for (auto [x, y] : pts) scan.residuals.push_back(y - scan.slope * x);
    scan.within_bracket =
        scan.slope > 0.0 && scan.slope <= (1.0 + tol) * std::log(static_cast<double>(2 * d + 1));
    return scan;
}

// ---- pinned events ----

void validate(const PinnedEventSpec& spec) {
    if (spec.n <= 0) throw std::invalid_argument("pinned event: n must be positive");
    if (spec.q < 1.0) throw std::invalid_argument("pinned event: q must be >= 1");
    bool has_origin = false;
    for (const auto& p : spec.lambda)
        if (p == origin()) has_origin = true;
    if (!has_origin) throw std::invalid_argument("pinned event: lambda must contain the origin");
}

PinnedEstimate pinned_tail(const PinnedEventSpec& spec, const PinnedOptions& opt) {
    validate(spec);
    const int d = spec.d;
    const std::int64_t n = spec.n;
    const std::uint32_t card = 2u * static_cast<std::uint32_t>(d) + 1u;
    const double base_p = 1.0 / static_cast<double>(card);
    const double threshold = static_cast<double>(n) * spec.xi;
    const double theta_max = 2.0;

    std::unordered_map<Point, int, PointHash> lambda_index;
    for (std::size_t i = 0; i < spec.lambda.size(); ++i)
        lambda_index[spec.lambda[i]] = static_cast<int>(i);

    LogAcc total = parallel_fold<LogAcc>(
        opt.samples, 16, LogAcc{},
        [&](std::uint64_t i, LogAcc& acc) {
            Rng rng(opt.seed, opt.stream_base + i);
            Point pos = origin();
            std::vector<std::int64_t> counts(spec.lambda.size(), 0);
            double log_w = 0.0;
            for (std::int64_t k = 0; k < n; ++k) {
                auto it = lambda_index.find(pos);
                if (it != lambda_index.end()) ++counts[static_cast<std::size_t>(it->second)];

                const double remaining = static_cast<double>(n - k);
                // candidate weights: stay = 1, +e_i = e^{theta_i}, -e_i = e^{-theta_i}
                double wplus[kMaxDim], wminus[kMaxDim];
                double z = 1.0;
                for (int a = 0; a < d; ++a) {
                    double t = -opt.tilt * static_cast<double>(pos[a]) / remaining *
                               (static_cast<double>(card) / 2.0);
                    t = std::clamp(t, -theta_max, theta_max);
                    wplus[a] = std::exp(t);
                    wminus[a] = 1.0 / wplus[a];
                    z += wplus[a] + wminus[a];
                }
                // mixture with q_stay toward lambda candidates
                int n_hits = 0;
                if (opt.q_stay > 0.0) {
                    for (std::uint32_t r = 0; r < card; ++r) {
                        Point c = pos;
                        if (r != 0) {
                            std::uint32_t axis = (r - 1) >> 1;
                            c[axis] += (r & 1u) ? 1 : -1;
                        }
                        if (lambda_index.count(c)) ++n_hits;
                    }
                }
                const double boost = n_hits > 0 ? opt.q_stay / static_cast<double>(n_hits) : 0.0;
                const double mix = n_hits > 0 ? 1.0 - opt.q_stay : 1.0;

                double u = rng.uniform();
                double cum = 0.0;
                std::uint32_t pick = card - 1;
                double q_pick = 0.0;
                for (std::uint32_t r = 0; r < card; ++r) {
                    double w = r == 0 ? 1.0 : ((r & 1u) ? wplus[(r - 1) >> 1] : wminus[(r - 1) >> 1]);
                    double q = mix * w / z;
                    if (boost > 0.0) {
                        Point c = pos;
                        if (r != 0) {
                            std::uint32_t axis = (r - 1) >> 1;
                            c[axis] += (r & 1u) ? 1 : -1;
                        }
                        if (lambda_index.count(c)) q += boost;
                    }
                    cum += q;
                    if (u < cum || r + 1 == card) {
                        pick = r;
                        q_pick = q;
                        break;
                    }
                }
                log_w += std::log(base_p) - std::log(q_pick);
                if (pick != 0) {
                    std::uint32_t axis = (pick - 1) >> 1;
                    pos[axis] += (pick & 1u) ? 1 : -1;
                }
            }
            acc.add_weight(log_w);
            if (pos != origin()) return;
            double norm_q = 0.0;
            for (auto c : counts)
                norm_q += std::pow(static_cast<double>(c), spec.q);
            norm_q = std::pow(norm_q, 1.0 / spec.q);
            if (norm_q >= threshold) acc.add_event(log_w);
        },
        [](LogAcc& a, const LogAcc& b) { a.merge(b); });

    PinnedEstimate out;
    out.spec = spec;
    out.samples = opt.samples;
    TailEstimate tmp;
    tmp.n = n;
    tmp.xi = 0.0;
    finish_weighted(tmp, total, opt.samples);
    out.p_hat = tmp.p_hat;
    out.log_p = tmp.log_p;
    out.ess = tmp.ess;
    out.a_n = -tmp.log_p;
    out.a_stderr = (tmp.p_hat > 0.0 && !tmp.censored) ? tmp.stderr_ / tmp.p_hat : 0.0;
    return out;
}

SubadditivityReport subadditivity_probe(const std::vector<PinnedEventSpec>& specs,
                                        const PinnedOptions& opt) {
    SubadditivityReport rep;
    for (const auto& spec : specs) {
        PinnedEstimate base = pinned_tail(spec, opt);
        PinnedEventSpec doubled = spec;
        doubled.n = 2 * spec.n;
        PinnedOptions opt2 = opt;
        opt2.stream_base = opt.stream_base + opt.samples;
        PinnedEstimate twice = pinned_tail(doubled, opt2);
        rep.estimates.push_back(base);
        rep.estimates.push_back(twice);
        SubadditivityRow row;
        row.n = spec.n;
        row.a_n = base.a_n;
        row.a_2n = twice.a_n;
        row.defect = twice.a_n - 2.0 * base.a_n;
        row.combined_err = twice.a_stderr + 2.0 * base.a_stderr;
        row.slack = 2.0 * std::log(static_cast<double>(spec.n));
        row.flagged = row.defect > 3.0 * (row.combined_err + row.slack);
        rep.rows.push_back(row);
    }
    return rep;
}

std::string SubadditivityReport::csv() const {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "n,a_n,a_2n,defect,combined_err,slack,flagged\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.a_n << ',' << r.a_2n << ',' << r.defect << ',' << r.combined_err
            << ',' << r.slack << ',' << (r.flagged ? 1 : 0) << "\n";
    return out.str();
}

// ---- mutual intersections ----

MutualStats zeta_q(int d, double q, std::int64_t horizon, std::uint64_t pairs, std::uint64_t seed,
                   double filter_eps, std::uint64_t stream_base) {
    if (q <= 1.0 || q > 2.0) throw std::invalid_argument("zeta_q: q must be in (1,2]");
    MutualStats stats;
    stats.q = q;
    stats.horizon = horizon;
    stats.filter_eps = filter_eps;
    stats.zeta.assign(pairs, 0.0);
    if (filter_eps > 0.0) stats.filtered.assign(pairs, 0.0);
    const double cutoff = filter_eps * std::sqrt(static_cast<double>(horizon));

    parallel_for(pairs, [&](std::uint64_t i) {
        LocalTimeField a = accumulate_walk({d, horizon, seed, stream_base + 2 * i});
        LocalTimeField b = accumulate_walk({d, horizon, seed, stream_base + 2 * i + 1});
        const auto& small = a.support_size() <= b.support_size() ? a : b;
        const auto& large = a.support_size() <= b.support_size() ? b : a;
        const bool small_is_a = a.support_size() <= b.support_size();
        double z = 0.0, f = 0.0;
        small.for_each([&](const Point& p, std::int64_t c_small) {
            std::int64_t c_large = large.count(p);
            if (c_large == 0) return;
            std::int64_t la = small_is_a ? c_small : c_large;
            std::int64_t lb = small_is_a ? c_large : c_small;
            z += static_cast<double>(la) *
                 std::pow(static_cast<double>(lb), q - 1.0);
            if (filter_eps > 0.0 && static_cast<double>(std::min(la, lb)) < cutoff)
                f += static_cast<double>(la) * static_cast<double>(lb);
        });
        stats.zeta[i] = z;
        if (filter_eps > 0.0) stats.filtered[i] = f;
    });

    double m1 = 0, m2 = 0, m3 = 0;
    for (double z : stats.zeta) {
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
    }
    const double m = static_cast<double>(pairs);
    stats.moments[0] = m1 / m;
    stats.moments[1] = m2 / m;
    stats.moments[2] = m3 / m;
    stats.mean = stats.moments[0];
    double var = stats.moments[1] - stats.mean * stats.mean;
    stats.stderr_ = std::sqrt(std::max(var, 0.0) / m);
    return stats;
}

MomentGrowthReport moment_growth_check(const MutualStats& stats, int max_order) {
    if (max_order < 1 || max_order > 4)
        throw std::invalid_argument("moment_growth_check: order must be in 1..4");
    if (stats.zeta.size() < 100)
        throw std::invalid_argument("moment_growth_check: too few samples");
    MomentGrowthReport rep;
    rep.q = stats.q;
    rep.max_order = max_order;
    const double m = static_cast<double>(stats.zeta.size());
    for (int k = 1; k <= max_order; ++k) {
        double s = 0.0;
        for (double z : stats.zeta) s += std::pow(z, k);
        rep.moments.push_back(s / m);
    }
    double factorial = 1.0;
    for (int k = 1; k <= max_order; ++k) {
        factorial *= k;
        double c = std::pow(rep.moments[static_cast<std::size_t>(k - 1)] /
                                std::pow(factorial, stats.q),
                            1.0 / k);
        rep.fitted_c.push_back(c);
    }
    // bounded: no later constant may exceed twice the head of the sequence
    double head = std::max(rep.fitted_c[0], rep.fitted_c.size() > 1 ? rep.fitted_c[1] : 0.0);
    rep.bounded = true;
    for (double c : rep.fitted_c)
        if (c > 2.0 * head + 1e-12) rep.bounded = false;
    return rep;
}

}  // namespace siltlab
