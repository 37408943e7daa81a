#include "siltlab/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace siltlab {

void LocalTimeField::merge(const LocalTimeField& other) {
    if (other.dim_ != dim_) throw std::invalid_argument("field merge: dimension mismatch");
    elapsed_ += other.elapsed_;
    other.counts_.for_each([&](const Point& p, std::int64_t c) { counts_.add(p, c); });
}

std::string LocalTimeField::to_csv() const {
    std::ostringstream out;
    for (int i = 0; i < dim_; ++i) out << "x_" << (i + 1) << ",";
    out << "count\n";
    // sorted for stable output
    std::vector<std::pair<Point, std::int64_t>> rows;
    rows.reserve(counts_.size());
    counts_.for_each([&](const Point& p, std::int64_t c) { rows.emplace_back(p, c); });
    std::sort(rows.begin(), rows.end());
    for (const auto& [p, c] : rows) {
        for (int i = 0; i < dim_; ++i) out << p[i] << ",";
        out << c << "\n";
    }
    return out.str();
}

LocalTimeField LocalTimeField::from_csv(const std::string& text, int dim) {
    LocalTimeField field(dim);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        Point p{};
        std::string cell;
        for (int i = 0; i < dim; ++i) {
            std::getline(row, cell, ',');
            p[i] = std::stoll(cell);
        }
        std::getline(row, cell, ',');
        std::int64_t c = std::stoll(cell);
        field.counts_.add(p, c);
        field.elapsed_ += c;
    }
    return field;
}

LocalTimeField accumulate(const WalkPath& path) {
    LocalTimeField field(path.config.dim);
    const std::size_t n = path.positions.empty() ? 0 : path.positions.size() - 1;
    for (std::size_t k = 0; k < n; ++k) field.add(path.positions[k]);
    return field;
}

LocalTimeField accumulate_walk(const WalkConfig& cfg) {
    LocalTimeField field(cfg.dim);
    walk_stream(cfg, [&](std::int64_t k, const Point& p) {
        if (k < cfg.n_steps) field.add(p);
    });
    return field;
}

IntersectionStats intersection_stats(const LocalTimeField& field) {
    IntersectionStats s;
    s.n = field.elapsed();
    field.for_each([&](const Point&, std::int64_t c) {
        s.b_n += c * (c - 1) / 2;
        s.norm2_sq += c * c;
    });
    return s;
}

double q_norm(const LocalTimeField& field, double q) {
    if (q < 1.0) throw std::invalid_argument("q_norm: q must be >= 1");
    if (q == 1.0) return static_cast<double>(field.elapsed());
    if (q == 2.0) return std::sqrt(static_cast<double>(intersection_stats(field).norm2_sq));
    double sum = 0.0, comp = 0.0;  // Kahan
    field.for_each([&](const Point&, std::int64_t c) {
        double term = std::pow(static_cast<double>(c), q) - comp;
        double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    });
    return std::pow(sum, 1.0 / q);
}

void validate(const LevelSetSpec& spec) {
    switch (spec.kind) {
        case LevelSetKind::Window:
            if (spec.A <= 1.0 || spec.xi <= 0.0)
                throw std::invalid_argument("level set: window needs A > 1 and xi > 0");
            break;
        case LevelSetKind::Range:
            if (spec.eps0 <= 0.0) throw std::invalid_argument("level set: eps0 must be positive");
            break;
        case LevelSetKind::Threshold:
            if (spec.threshold <= 0.0)
                throw std::invalid_argument("level set: threshold must be positive");
            break;
    }
}

PointSet level_set(const LocalTimeField& field, const LevelSetSpec& spec) {
    validate(spec);
    double lo = 0.0, hi = 0.0;
    bool hi_strict = false;
    switch (spec.kind) {
        case LevelSetKind::Window:
            lo = spec.xi / spec.A;
            hi = spec.A * spec.xi;
            hi_strict = true;
            break;
        case LevelSetKind::Range: {
            double n = static_cast<double>(field.elapsed());
            lo = std::pow(n, 0.5 - spec.eps0);
            hi = std::pow(n, 0.5 + spec.eps0);
            break;
        }
        case LevelSetKind::Threshold:
            lo = spec.threshold;
            hi = std::numeric_limits<double>::infinity();
            break;
    }
    PointSet out;
    field.for_each([&](const Point& p, std::int64_t c) {
        double v = static_cast<double>(c);
        if (v >= lo && (hi_strict ? v < hi : v <= hi)) out.push_back(p);
    });
    std::sort(out.begin(), out.end());
    return out;
}

double restricted_q_norm(const LocalTimeField& field, const PointSet& sites, double q) {
    if (q < 1.0) throw std::invalid_argument("q_norm: q must be >= 1");
    double sum = 0.0, comp = 0.0;
    for (const auto& p : sites) {
        std::int64_t c = field.count(p);
        if (c == 0) continue;
        double term = std::pow(static_cast<double>(c), q) - comp;
        double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum == 0.0 ? 0.0 : std::pow(sum, 1.0 / q);
}

}  // namespace siltlab
