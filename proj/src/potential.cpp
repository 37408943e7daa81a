#include "siltlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "siltlab/parallel.hpp"
#include "siltlab/rng.hpp"
#include "siltlab/walk.hpp"

namespace siltlab {

namespace {

// C(n,k) table, large enough for box_radius + dim <= 72.
constexpr int kChooseMax = 72;

const std::uint64_t* choose_table() {
    static std::uint64_t table[kChooseMax + 1][kMaxDim + 2] = {};
    static bool built = [] {
        for (int n = 0; n <= kChooseMax; ++n) {
            table[n][0] = 1;
            for (int k = 1; k <= kMaxDim + 1; ++k) {
                table[n][k] = (k > n) ? 0 : table[n - 1][k - 1] + table[n - 1][k];
            }
        }
        return true;
    }();
    (void)built;
    return &table[0][0];
}

std::uint64_t choose(int n, int k) {
    if (k < 0 || k > n || n < 0 || n > kChooseMax) return 0;
    return choose_table()[n * (kMaxDim + 2) + k];
}

// Canonical tuples are ranked through the strictly increasing transform
// b_i = c_i + i, a combination of size d from {0,..,R+d-1}, in colex order.
std::size_t rank_sorted(const int* c, int dim) {
    std::uint64_t r = 0;
    for (int i = 0; i < dim; ++i) r += choose(c[i] + i, i + 1);
    return static_cast<std::size_t>(r);
}

// Inverse of rank_sorted: decodes rank into a sorted tuple.
void unrank_sorted(std::size_t rank, int dim, int box_radius, int* c) {
    std::uint64_t r = rank;
    for (int i = dim - 1; i >= 0; --i) {
        int b = box_radius + i;  // largest possible b_i
        while (choose(b, i + 1) > r) --b;
        r -= choose(b, i + 1);
        c[i] = b - i;
    }
}

struct NeighborTable {
    std::vector<std::uint32_t> idx;  // 2*dim entries per cell, sentinel if outside
    static constexpr std::uint32_t kOutside = 0xffffffffu;
};

// Out-of-box neighbors are wired to a padding cell that stays at zero, which
// keeps the sweep branch-free.
NeighborTable build_neighbors(int dim, int box_radius, std::size_t n_cells) {
    NeighborTable nb;
    nb.idx.assign(n_cells * 2 * static_cast<std::size_t>(dim),
                  static_cast<std::uint32_t>(n_cells));
    parallel_for(n_cells, [&](std::uint64_t cell) {
        int c[kMaxDim], t[kMaxDim];
        unrank_sorted(cell, dim, box_radius, c);
        for (int i = 0; i < dim; ++i) {
            for (int s = 0; s < 2; ++s) {
                int delta = s == 0 ? 1 : -1;
                std::memcpy(t, c, sizeof(int) * static_cast<std::size_t>(dim));
                t[i] += delta;
                if (t[i] > box_radius) continue;           // absorbed
                if (t[i] < 0) t[i] = -t[i];                // sign-flip symmetry
                std::sort(t, t + dim);
                nb.idx[cell * 2 * dim + 2 * i + s] =
                    static_cast<std::uint32_t>(rank_sorted(t, dim));
            }
        }
    });
    return nb;
}

std::uint64_t orbit_size(const int* c, int dim) {
    std::uint64_t signs = 1;
    for (int i = 0; i < dim; ++i)
        if (c[i] != 0) signs *= 2;
    // permutations of a sorted tuple with repeats
    std::uint64_t perms = 1;
    for (int i = 2; i <= dim; ++i) perms *= static_cast<std::uint64_t>(i);
    int i = 0;
    while (i < dim) {
        int j = i;
        while (j < dim && c[j] == c[i]) ++j;
        std::uint64_t run_fact = 1;
        for (int k = 2; k <= j - i; ++k) run_fact *= static_cast<std::uint64_t>(k);
        perms /= run_fact;
        i = j;
    }
    return signs * perms;
}

}  // namespace

std::size_t GreenTable::cell_rank(const std::array<int, kMaxDim>& sorted, int dim,
                                  int box_radius) {
    (void)box_radius;
    return rank_sorted(sorted.data(), dim);
}

GreenTable::GreenTable(int dim, int box_radius, std::int64_t horizon, std::vector<double> values,
                       double g0_at_half_horizon)
    : dim_(dim),
      box_radius_(box_radius),
      horizon_(horizon),
      g0_half_(g0_at_half_horizon),
      values_(std::move(values)) {}

double GreenTable::value_at(const Point& z) const {
    int c[kMaxDim];
    for (int i = 0; i < dim_; ++i) {
        std::int64_t v = z[i] < 0 ? -z[i] : z[i];
        if (v > box_radius_) return 0.0;
        c[i] = static_cast<int>(v);
    }
    std::sort(c, c + dim_);
    return values_[rank_sorted(c, dim_)];
}

double GreenTable::sum_sq() const {
    if (dim_ < 5) throw std::domain_error("sum_sq: needs dimension >= 5");
    double sum = 0.0, comp = 0.0;
    int c[kMaxDim];
    for (std::size_t cell = 0; cell < values_.size(); ++cell) {
        unrank_sorted(cell, dim_, box_radius_, c);
        double term =
            static_cast<double>(orbit_size(c, dim_)) * values_[cell] * values_[cell] - comp;
        double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum;
}

std::string GreenTable::to_csv() const {
    std::ostringstream out;
    out << "# d=" << dim_ << " R=" << box_radius_ << " N=" << horizon_ << " g0_half=" << std::setprecision(17)
        << g0_half_ << "\n";
    for (int i = 0; i < dim_; ++i) out << "z_" << (i + 1) << ",";
    out << "value\n";
    int c[kMaxDim];
    out << std::setprecision(17);
    for (std::size_t cell = 0; cell < values_.size(); ++cell) {
        unrank_sorted(cell, dim_, box_radius_, c);
        for (int i = 0; i < dim_; ++i) out << c[i] << ",";
        out << values_[cell] << "\n";
    }
    return out.str();
}

GreenTable GreenTable::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# d=", 0) != 0)
        throw std::invalid_argument("green csv: missing header");
    int dim = 0, radius = 0;
    long long horizon = 0;
    double g0_half = 0.0;
    if (std::sscanf(line.c_str(), "# d=%d R=%d N=%lld g0_half=%lf", &dim, &radius, &horizon,
                    &g0_half) != 4)
        throw std::invalid_argument("green csv: bad header");
    std::getline(in, line);  // column row
    std::size_t n_cells =
        static_cast<std::size_t>(choose(radius + dim, dim));
    std::vector<double> values(n_cells, 0.0);
    int c[kMaxDim];
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        for (int i = 0; i < dim; ++i) {
            std::getline(row, cell, ',');
            c[i] = std::stoi(cell);
        }
        std::getline(row, cell, ',');
        values[rank_sorted(c, dim)] = std::stod(cell);
    }
    return GreenTable(dim, radius, horizon, std::move(values), g0_half);
}

GreenTable green_truncated(int dim, int box_radius, std::int64_t horizon, unsigned threads) {
    if (dim < 3) throw std::domain_error("green_truncated: walk must be transient (d >= 3)");
    if (dim > kMaxDim) throw std::invalid_argument("green_truncated: dimension too large");
    if (box_radius < 1 || box_radius + dim > kChooseMax)
        throw std::length_error("green_truncated: box radius out of budget");
    if (horizon < 0) throw std::invalid_argument("green_truncated: negative horizon");
    if (threads == 0) threads = default_threads();

    const std::size_t n_cells = static_cast<std::size_t>(choose(box_radius + dim, dim));
    NeighborTable nb = build_neighbors(dim, box_radius, n_cells);

    // one padding slot at the end, always zero
    std::vector<double> cur(n_cells + 1, 0.0), next(n_cells + 1, 0.0), acc(n_cells, 0.0);
    int zero[kMaxDim] = {};
    const std::size_t origin_cell = rank_sorted(zero, dim);
    cur[origin_cell] = 1.0;
    acc[origin_cell] = 1.0;  // n = 0 term

    const double inv_card = 1.0 / static_cast<double>(2 * dim + 1);
    double g0_half = acc[origin_cell];
    const std::int64_t half = horizon / 2;

    const std::size_t chunk = 8192;
    const std::uint64_t n_chunks = (n_cells + chunk - 1) / chunk;
    for (std::int64_t n = 1; n <= horizon; ++n) {
        parallel_for(
            n_chunks,
            [&](std::uint64_t c) {
                const std::size_t lo = c * chunk;
                const std::size_t hi = std::min(n_cells, lo + chunk);
                for (std::size_t cell = lo; cell < hi; ++cell) {
                    double s = cur[cell];
                    const std::uint32_t* row = &nb.idx[cell * 2 * dim];
                    for (int k = 0; k < 2 * dim; ++k) s += cur[row[k]];
                    double v = s * inv_card;
                    next[cell] = v;
                    acc[cell] += v;
                }
            },
            threads);
        std::swap(cur, next);
        if (n == half) g0_half = acc[origin_cell];
    }
    return GreenTable(dim, box_radius, horizon, std::move(acc), g0_half);
}

HittingEstimate hitting_prob_mc(const Point& start, const PointSet& target, int dim,
                                std::int64_t horizon, std::uint64_t samples, std::uint64_t seed,
                                std::uint64_t stream_base) {
    for (const auto& t : target)
        if (t == start) throw std::invalid_argument("hitting_prob_mc: start inside target");
    struct Acc {
        std::uint64_t hits = 0;
    };
    const std::uint32_t card = 2u * static_cast<std::uint32_t>(dim) + 1u;
    Acc total = parallel_fold<Acc>(
        samples, 4096, Acc{},
        [&](std::uint64_t i, Acc& acc) {
            Rng rng(seed, stream_base + i);
            Point pos = start;
            for (std::int64_t k = 0; k < horizon; ++k) {
                std::uint32_t r = rng.bounded(card);
                if (r != 0) {
                    std::uint32_t axis = (r - 1) >> 1;
                    pos[axis] += (r & 1u) ? 1 : -1;
                }
                for (const auto& t : target) {
                    if (t == pos) {
                        ++acc.hits;
                        return;
                    }
                }
            }
        },
        [](Acc& a, const Acc& b) { a.hits += b.hits; });
    HittingEstimate est;
    est.samples = samples;
    est.horizon = horizon;
    if (samples > 0) {
        double p = static_cast<double>(total.hits) / static_cast<double>(samples);
        est.p_hat = p;
        est.stderr_ = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
    }
    return est;
}

}  // namespace siltlab
