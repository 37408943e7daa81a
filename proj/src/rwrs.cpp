#include "siltlab/rwrs.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "siltlab/local_time.hpp"
#include "siltlab/parallel.hpp"
#include "siltlab/rng.hpp"

namespace siltlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// double-double accumulation (TwoSum), enough to make sums independent of
// the addition order at double precision
struct DD {
    double hi = 0.0, lo = 0.0;
    void add(double x) {
        double s = hi + x;
        double bb = s - hi;
        double err = (hi - (s - bb)) + (x - bb);
        hi = s;
        lo += err;
        double t = hi + lo;
        lo = lo - (t - hi);
        hi = t;
    }
    double value() const { return hi + lo; }
};

// 16-node Gauss-Legendre on [-1,1]
constexpr double kGlNodes[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeights[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                  0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                  0.0622535239386479, 0.0271524594117541};

template <class F>
double gl_panel(F&& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < 8; ++i)
        s += kGlWeights[i] * (f(c - h * kGlNodes[i]) + f(c + h * kGlNodes[i]));
    return s * h;
}

template <class F>
double gl_integrate(F&& f, double lo, double hi, int panels) {
    DD sum;
    const double step = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) sum.add(gl_panel(f, lo + p * step, lo + (p + 1) * step));
    return sum.value();
}

double log_density_norm(double alpha, double c) {
    // norm = alpha c^{1/alpha} / (2 Gamma(1/alpha))
    return std::log(alpha) + std::log(c) / alpha - std::log(2.0) - std::lgamma(1.0 / alpha);
}

}  // namespace

void validate(const SceneryConfig& cfg) {
    if (cfg.alpha <= 1.0) throw std::invalid_argument("scenery: alpha must exceed 1");
    if (cfg.c_alpha <= 0.0) throw std::invalid_argument("scenery: c_alpha must be positive");
}

double sample_eta(const SceneryConfig& cfg, const Point& z) {
    validate(cfg);
    Rng rng(cfg.seed, PointHash{}(z));
    const bool positive = rng.next_u64() & 1u;
    // |eta|^alpha ~ Gamma(1/alpha) / c_alpha
    double g = rng.gamma(1.0 / cfg.alpha);
    double mag = std::pow(g / cfg.c_alpha, 1.0 / cfg.alpha);
    return positive ? mag : -mag;
}

double eta_abs_moment(const SceneryConfig& cfg, int k) {
    validate(cfg);
    const double a = cfg.alpha, c = cfg.c_alpha;
    // integrand decays like exp(-c t^alpha); cut where the exponent passes -60
    const double cutoff = std::pow(60.0 / c, 1.0 / a);
    const double ln = log_density_norm(a, c);
    auto f = [&](double t) {
        return std::exp(ln + k * std::log(t) - c * std::pow(t, a));
    };
    return 2.0 * gl_integrate(f, 1e-12, cutoff, 64);
}

GammaValue gamma_log_laplace(const SceneryConfig& cfg, double x) {
    validate(cfg);
    if (x < 0.0) throw std::invalid_argument("gamma_log_laplace: x must be nonnegative");
    GammaValue out;
    if (x == 0.0) return out;
    const double a = cfg.alpha, c = cfg.c_alpha;
    // exponent g(t) = x t - c |t|^alpha, maximal at t* = (x/(c alpha))^{1/(alpha-1)}
    const double t_star = std::pow(x / (c * a), 1.0 / (a - 1.0));
    const double g_max = x * t_star - c * std::pow(t_star, a);
    auto g = [&](double t) { return x * t - c * std::pow(std::abs(t), a); };
    // bounds where the exponent has dropped 60 below the peak
    double hi = t_star + 1.0;
    while (g(hi) > g_max - 60.0) hi *= 1.5;
    double lo = -1.0;
    while (g(lo) > g_max - 60.0) lo *= 1.5;
    auto f = [&](double t) { return std::exp(g(t) - g_max); };
    const double i1 = gl_integrate(f, lo, hi, 96);
    const double i2 = gl_integrate(f, lo, hi, 192);
    const double ln = log_density_norm(a, c);
    // Gamma(x) = g_max + log integral + log norm; log1p route keeps the x->0
    // cancellation exact
    double v = g_max + std::log(i2) + ln;
    out.value = v;
    out.quad_error = std::abs(std::log(i2) - std::log(i1));
    if (!std::isfinite(v)) throw std::range_error("gamma_log_laplace: divergent integral");
    return out;
}

RwrsParams exponent_table(double alpha, double beta, int d) {
    RwrsParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.zeta = alpha * beta / (alpha + 1.0);
    p.b = beta / (alpha + 1.0);
    p.alpha_star = alpha / (alpha - 1.0);
    p.region2 = (alpha > 1.0 && alpha < static_cast<double>(d) / 2.0) &&
                (beta > 1.0 - 1.0 / (alpha + 2.0)) && (beta < 1.0 + 1.0 / alpha);
    return p;
}

RwrsValue rwrs_value(const WalkConfig& walk, const SceneryConfig& scenery, std::int64_t n) {
    WalkConfig cfg = walk;
    cfg.n_steps = n;
    LocalTimeField field(cfg.dim);
    DD path_sum;
    walk_stream(cfg, [&](std::int64_t k, const Point& p) {
        if (k < n) {
            field.add(p);
            path_sum.add(sample_eta(scenery, p));
        }
    });
    DD inner;
    field.for_each([&](const Point& p, std::int64_t c) {
        inner.add(sample_eta(scenery, p) * static_cast<double>(c));
    });
    RwrsValue out;
    out.inner_product = inner.value();
    out.path_sum = path_sum.value();
    return out;
}

std::vector<MdPoint> md_scan(int d, const SceneryConfig& scenery, const RwrsParams& params,
                             double xi, const std::vector<std::int64_t>& n_grid,
                             const MdOptions& opt) {
    std::vector<MdPoint> out;
    const std::uint32_t card = 2u * static_cast<std::uint32_t>(d) + 1u;
    const double base_p = 1.0 / static_cast<double>(card);

    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::int64_t n = n_grid[gi];
        const double threshold = xi * std::pow(static_cast<double>(n), params.beta);
        const double hi_cut = std::pow(static_cast<double>(n), params.b + opt.level_eps);
        const double lo_cut = std::pow(static_cast<double>(n), params.b - opt.level_eps);
        const std::int64_t window =
            opt.sampler == MdSampler::Importance
                ? static_cast<std::int64_t>(std::pow(
                      static_cast<double>(n),
                      opt.window_exponent > 0.0 ? opt.window_exponent : params.zeta))
                : 0;

        struct Cell {
            double max_log = kNegInf;
            double sum = 0.0, sum_sq = 0.0;
            double w_max = kNegInf, w_sum = 0.0, w_sum_sq = 0.0;
            std::uint64_t hits = 0;
            DD high, mid, low;
            void merge(const Cell& o) {
                hits += o.hits;
                auto fold = [](double& mx, double& s, double& s2, double omx, double os,
                               double os2) {
                    if (omx == kNegInf) return;
                    if (omx > mx) {
                        double shift = (mx > kNegInf) ? std::exp(mx - omx) : 0.0;
                        s = s * shift + os;
                        s2 = s2 * shift * shift + os2;
                        mx = omx;
                    } else {
                        double shift = std::exp(omx - mx);
                        s += os * shift;
                        s2 += os2 * shift * shift;
                    }
                };
                fold(max_log, sum, sum_sq, o.max_log, o.sum, o.sum_sq);
                fold(w_max, w_sum, w_sum_sq, o.w_max, o.w_sum, o.w_sum_sq);
                high.add(o.high.value());
                mid.add(o.mid.value());
                low.add(o.low.value());
            }
        };

        Cell total = parallel_fold<Cell>(
            opt.samples, 16, Cell{},
            [&](std::uint64_t i, Cell& acc) {
                const std::uint64_t replica_stream = opt.stream_base + gi * opt.samples + i;
                Rng rng(opt.seed, replica_stream);
                SceneryConfig replica_scenery = scenery;
                replica_scenery.seed = mix64(scenery.seed, replica_stream + 1);
                LocalTimeField field(d);
                Point pos = origin();
                double log_w = 0.0;
                for (std::int64_t k = 0; k < n; ++k) {
                    field.add(pos);
                    if (k < window && opt.q_stay > 0.0) {
                        // pull toward the origin's neighborhood
                        bool hit[17] = {};
                        int n_hits = 0;
                        Point cand[17];
                        for (std::uint32_t r = 0; r < card; ++r) {
                            Point c = pos;
                            if (r != 0) {
                                std::uint32_t axis = (r - 1) >> 1;
                                c[axis] += (r & 1u) ? 1 : -1;
                            }
                            cand[r] = c;
                            hit[r] = c == origin();
                            if (hit[r]) ++n_hits;
                        }
                        const double boost =
                            n_hits > 0 ? opt.q_stay / static_cast<double>(n_hits) : 0.0;
                        const double mix = n_hits > 0 ? 1.0 - opt.q_stay : 1.0;
                        double u = rng.uniform();
                        double cum = 0.0;
                        std::uint32_t pick = card - 1;
                        double q_pick = base_p;
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
                DD value, vh, vm, vl;
                field.for_each([&](const Point& p, std::int64_t c) {
                    double term = sample_eta(replica_scenery, p) * static_cast<double>(c);
                    value.add(term);
                    double lc = static_cast<double>(c);
                    if (lc >= hi_cut)
                        vh.add(term);
                    else if (lc <= lo_cut)
                        vl.add(term);
                    else
                        vm.add(term);
                });
                acc.high.add(vh.value());
                acc.mid.add(vm.value());
                acc.low.add(vl.value());
                // weight bookkeeping mirrors the tail estimators
                auto push = [](double& mx, double& s, double& s2, double lw, double pow2) {
                    if (lw > mx) {
                        double shift = (mx > kNegInf) ? std::exp(mx - lw) : 0.0;
                        s = s * shift + 1.0;
                        s2 = s2 * shift * shift + pow2;
                        mx = lw;
                    } else {
                        s += std::exp(lw - mx);
                        s2 += std::exp(2.0 * (lw - mx)) * pow2;
                    }
                };
                push(acc.w_max, acc.w_sum, acc.w_sum_sq, log_w, 1.0);
                if (value.value() >= threshold) {
                    ++acc.hits;
                    push(acc.max_log, acc.sum, acc.sum_sq, log_w, 1.0);
                }
            },
            [](Cell& a, const Cell& b) { a.merge(b); });

        MdPoint pt;
        pt.n = n;
        pt.xi = xi;
        const double m = static_cast<double>(opt.samples);
        if (total.hits == 0) {
            pt.censored = true;
            pt.p_hat = 3.0 / m;
            pt.log_p = kNegInf;
        } else {
            pt.log_p = total.max_log + std::log(total.sum / m);
            pt.p_hat = std::exp(pt.log_p);
            double m2 = std::exp(2.0 * total.max_log + std::log(total.sum_sq / m));
            pt.stderr_ = std::sqrt(std::max(m2 - pt.p_hat * pt.p_hat, 0.0) / m);
        }
        if (total.w_sum_sq > 0.0) pt.ess = total.w_sum * total.w_sum / total.w_sum_sq;
        if (std::isfinite(pt.log_p))
            pt.normalized_rate = -pt.log_p / std::pow(static_cast<double>(n), params.zeta);
        pt.part_high = total.high.value() / m;
        pt.part_mid = total.mid.value() / m;
        pt.part_low = total.low.value() / m;
        out.push_back(pt);
    }
    return out;
}

std::string md_points_csv(const std::vector<MdPoint>& points, const RwrsParams& params, int d) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "method,d,n,xi,p_hat,stderr,log_p,normalized_rate,ess,alpha,beta,zeta,part_high,"
           "part_mid,part_low\n";
    for (const auto& p : points)
        out << "rwrs," << d << ',' << p.n << ',' << p.xi << ',' << p.p_hat << ',' << p.stderr_
            << ',' << p.log_p << ',' << p.normalized_rate << ',' << p.ess << ',' << params.alpha
            << ',' << params.beta << ',' << params.zeta << ',' << p.part_high << ',' << p.part_mid
            << ',' << p.part_low << "\n";
    return out.str();
}

}  // namespace siltlab
