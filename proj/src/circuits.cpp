#include "siltlab/circuits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "siltlab/parallel.hpp"
#include "siltlab/rng.hpp"

namespace siltlab {

std::int64_t VisitVector::total() const {
    std::int64_t t = 0;
    for (const auto& [p, k] : targets) t += k;
    return t;
}

bool visit_vector_admissible(const VisitVector& k, const PointSet& inner) {
    const double sqrt_n = std::sqrt(k.n);
    double inner_sq = 0.0;
    for (const auto& p : inner) {
        auto it = k.targets.find(p);
        std::int64_t v = it == k.targets.end() ? 0 : it->second;
        if (static_cast<double>(v) < sqrt_n / k.A) return false;
        inner_sq += static_cast<double>(v) * static_cast<double>(v);
    }
    for (const auto& [p, v] : k.targets)
        if (static_cast<double>(v) > k.A * sqrt_n) return false;
    return inner_sq >= k.n * k.xi;
}

std::int64_t long_jump_count(const Circuit& c, std::int64_t scale) {
    const double cutoff = std::sqrt(static_cast<double>(scale));
    std::int64_t count = 0;
    for (std::size_t i = 0; i + 1 < c.word.size(); ++i)
        if (static_cast<double>(l1_dist(c.word[i], c.word[i + 1], c.dim)) > cutoff) ++count;
    return count;
}

bool circuit_matches(const Circuit& c, const VisitVector& k) {
    std::unordered_map<Point, std::int64_t, PointHash> occ;
    for (const auto& p : c.word) ++occ[p];
    if (occ.size() > k.targets.size()) return false;
    for (const auto& [p, v] : k.targets) {
        auto it = occ.find(p);
        std::int64_t have = it == occ.end() ? 0 : it->second;
        if (have != v) return false;
    }
    return true;
}

Circuit extract_circuit(const WalkPath& path, const PointSet& marked) {
    if (marked.empty()) throw std::invalid_argument("extract_circuit: empty marked set");
    std::unordered_map<Point, char, PointHash> in_marked;
    for (const auto& p : marked) in_marked[p] = 1;
    Circuit c;
    c.dim = path.config.dim;
    const std::size_t n = path.positions.empty() ? 0 : path.positions.size() - 1;
    for (std::size_t k = 0; k < n; ++k)
        if (in_marked.count(path.positions[k])) c.word.push_back(path.positions[k]);
    return c;
}

void validate(const SurgeryContext& ctx) {
    if (ctx.covers.empty()) throw std::invalid_argument("surgery: no covers");
    if (ctx.c_index >= ctx.covers.size() || ctx.t_index >= ctx.covers.size() ||
        ctx.c_index == ctx.t_index)
        throw std::invalid_argument("surgery: bad designated pair");
    std::unordered_map<Point, int, PointHash> seen;
    for (std::size_t i = 0; i < ctx.covers.size(); ++i) {
        if (ctx.covers[i].empty()) throw std::invalid_argument("surgery: empty cover");
        for (const auto& p : ctx.covers[i])
            if (!seen.emplace(p, static_cast<int>(i)).second)
                throw std::invalid_argument("surgery: covers overlap");
    }
    PointSet translated = ctx.covers[ctx.c_index];
    for (auto& p : translated) p = add(p, ctx.shift);
    std::sort(translated.begin(), translated.end());
    PointSet target = ctx.covers[ctx.t_index];
    std::sort(target.begin(), target.end());
    if (translated != target)
        throw std::invalid_argument("surgery: clusters are not translates under the shift");
}

int LoopAnnotation::improper_count() const {
    int c = 0;
    for (const auto& l : loops)
        if (l.pair_member && !l.proper) ++c;
    return c;
}

LoopAnnotation annotate(const Circuit& c, const SurgeryContext& ctx) {
    validate(ctx);
    std::unordered_map<Point, int, PointHash> cluster_of;
    for (std::size_t i = 0; i < ctx.covers.size(); ++i)
        for (const auto& p : ctx.covers[i]) cluster_of[p] = static_cast<int>(i);

    LoopAnnotation ann;
    const int ci = static_cast<int>(ctx.c_index), ti = static_cast<int>(ctx.t_index);
    int pos = 0;
    const int len = static_cast<int>(c.word.size());
    while (pos < len) {
        auto it = cluster_of.find(c.word[pos]);
        if (it == cluster_of.end()) throw std::invalid_argument("annotate: site not covered");
        LoopInfo loop;
        loop.begin = pos;
        loop.cluster = it->second;
        while (pos < len) {
            auto jt = cluster_of.find(c.word[pos]);
            if (jt == cluster_of.end()) throw std::invalid_argument("annotate: site not covered");
            if (jt->second != loop.cluster) break;
            ++pos;
        }
        loop.end = pos;
        loop.entry = c.word[loop.begin];
        loop.exit = c.word[loop.end - 1];
        loop.pair_member = loop.cluster == ci || loop.cluster == ti;
        loop.in_c = loop.cluster == ci;
        if (loop.pair_member) {
            loop.base_type = loop.in_c
                                 ? std::make_pair(loop.entry, loop.exit)
                                 : std::make_pair(sub(loop.entry, ctx.shift),
                                                  sub(loop.exit, ctx.shift));
            int prev_cluster = -1;
            if (loop.begin > 0) prev_cluster = cluster_of.at(c.word[loop.begin - 1]);
            int partner = loop.in_c ? ti : ci;
            loop.proper = prev_cluster != partner;  // word start counts as outside
        }
        ann.loops.push_back(loop);
    }
    // blocks: maximal runs of pair loops
    for (std::size_t i = 0; i < ann.loops.size();) {
        if (!ann.loops[i].pair_member) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < ann.loops.size() && ann.loops[j].pair_member) ++j;
        Block b;
        b.first_loop = static_cast<int>(i);
        b.n_loops = static_cast<int>(j - i);
        for (std::size_t k = i; k < j; ++k) ann.loops[k].block = static_cast<int>(ann.blocks.size());
        ann.blocks.push_back(b);
        i = j;
    }
    for (const auto& l : ann.loops) {
        if (!l.pair_member || !l.proper) continue;
        auto& entry = ann.nu[l.base_type];
        if (l.in_c)
            ++entry.first;
        else
            ++entry.second;
    }
    return ann;
}

// ---- binary words ----

std::vector<std::uint32_t> omega_enumerate(int n, int m) {
    if (n < 0 || m < 0 || n + m > 20) throw std::length_error("omega: n+m out of budget");
    const int len = n + m;
    std::vector<std::uint32_t> out;
    if (n == 0) {
        out.push_back(0);
        return out;
    }
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = i;
    for (;;) {
        std::uint32_t mask = 0;
        for (int p : pos) mask |= 1u << (len - 1 - p);
        out.push_back(mask);
        int i = n - 1;
        while (i >= 0 && pos[i] == len - n + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (int j = i + 1; j < n; ++j) pos[j] = pos[j - 1] + 1;
    }
    return out;
}

std::string word_to_string(std::uint32_t mask, int length) {
    std::string s(static_cast<std::size_t>(length), '0');
    for (int i = 0; i < length; ++i)
        if (mask & (1u << (length - 1 - i))) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

namespace {

std::vector<int> one_positions(std::uint32_t mask, int length) {
    std::vector<int> pos;
    for (int i = 0; i < length; ++i)
        if (mask & (1u << (length - 1 - i))) pos.push_back(i);
    return pos;
}

// Enumerates the m-subsets of a fixed position list in lexicographic order;
// these are exactly the dominance neighbors of a word.
struct SubsetIter {
    std::vector<int> positions;
    int m = 0;
    int length = 0;
    std::array<int, 24> idx{};
    bool exhausted = false;

    SubsetIter(std::uint32_t mask, int len, int choose_m) : m(choose_m), length(len) {
        positions = one_positions(mask, len);
        if (m > static_cast<int>(positions.size())) {
            exhausted = true;
            return;
        }
        for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    }

    // returns false when no subsets remain
    bool next(std::uint32_t& out) {
        if (exhausted) return false;
        std::uint32_t mask = 0;
        for (int i = 0; i < m; ++i)
            mask |= 1u << (length - 1 - positions[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
        out = mask;
        const int n = static_cast<int>(positions.size());
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) {
            exhausted = true;
        } else {
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < m; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
        return true;
    }
};

}  // namespace

FrobeniusMatching::FrobeniusMatching(int n, int m) : n_(n), m_(m) {
    if (n < m) throw std::invalid_argument("frobenius: requires n >= m");
    if (n + m > 20) throw std::length_error("frobenius: n+m out of budget");
    left_ = omega_enumerate(n, m);
    right_ = omega_enumerate(m, n);
    for (std::size_t i = 0; i < left_.size(); ++i) left_rank_[left_[i]] = i;
    match_.assign(left_.size(), SIZE_MAX);

    if (n == m) {
        for (std::size_t i = 0; i < left_.size(); ++i) match_[i] = i;
        return;
    }

    std::unordered_map<std::uint32_t, std::size_t> right_rank;
    for (std::size_t i = 0; i < right_.size(); ++i) right_rank[right_[i]] = i;
    const int len = n + m;

    std::vector<std::size_t> match_r(right_.size(), SIZE_MAX);
    std::vector<std::uint32_t> stamp(right_.size(), 0);
    std::uint32_t cur_stamp = 0;

    // greedy pass over the canonical order
    for (std::size_t u = 0; u < left_.size(); ++u) {
        SubsetIter it(left_[u], len, m);
        std::uint32_t w_mask;
        while (it.next(w_mask)) {
            std::size_t w = right_rank.at(w_mask);
            if (match_r[w] == SIZE_MAX) {
                match_r[w] = u;
                match_[u] = w;
                break;
            }
        }
    }

    struct Frame {
        std::size_t u;
        SubsetIter it;
        std::size_t w = SIZE_MAX;
    };
    for (std::size_t src = 0; src < left_.size(); ++src) {
        if (match_[src] != SIZE_MAX) continue;
        ++cur_stamp;
        std::vector<Frame> stack;
        stack.push_back({src, SubsetIter(left_[src], len, m), SIZE_MAX});
        bool augmented = false;
        while (!stack.empty() && !augmented) {
            Frame& f = stack.back();
            std::uint32_t w_mask;
            std::size_t w = SIZE_MAX;
            while (f.it.next(w_mask)) {
                std::size_t cand = right_rank.at(w_mask);
                if (stamp[cand] != cur_stamp) {
                    stamp[cand] = cur_stamp;
                    w = cand;
                    break;
                }
            }
            if (w == SIZE_MAX) {
                stack.pop_back();
                continue;
            }
            f.w = w;
            if (match_r[w] == SIZE_MAX) {
                for (auto rit = stack.rbegin(); rit != stack.rend(); ++rit) {
                    match_r[rit->w] = rit->u;
                    match_[rit->u] = rit->w;
                }
                augmented = true;
            } else {
                std::size_t next_u = match_r[w];
                stack.push_back({next_u, SubsetIter(left_[next_u], len, m), SIZE_MAX});
            }
        }
        if (!augmented)
            throw std::logic_error("frobenius: no augmenting path; the matching code is broken");
    }
}

std::uint32_t FrobeniusMatching::map_word(std::uint32_t eta) const {
    auto it = left_rank_.find(eta);
    if (it == left_rank_.end()) throw std::invalid_argument("frobenius: word not in Omega_{n,m}");
    return right_[match_[it->second]];
}

bool FrobeniusMatching::verify() const {
    std::vector<char> used(right_.size(), 0);
    for (std::size_t i = 0; i < left_.size(); ++i) {
        std::size_t w = match_[i];
        if (w == SIZE_MAX || w >= right_.size()) return false;
        if (used[w]) return false;
        used[w] = 1;
        if (!dominates(left_[i], right_[w])) return false;
    }
    return true;
}

std::string FrobeniusMatching::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["m"] = m_;
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < left_.size(); ++i) {
        pairs.push_back({{"eta", word_to_string(left_[i], n_ + m_)},
                         {"zeta", word_to_string(right_[match_[i]], n_ + m_)}});
    }
    j["pairs"] = pairs;
    return j.dump(2);
}

FrobeniusMatching frobenius_matching(int n, int m) { return FrobeniusMatching(n, m); }

MatchingProvider default_matching_provider() {
    auto cache = std::make_shared<std::map<std::pair<int, int>, FrobeniusMatching>>();
    return [cache](std::uint32_t eta, int a, int b) -> std::uint32_t {
        auto key = std::make_pair(a, b);
        auto it = cache->find(key);
        if (it == cache->end()) it = cache->emplace(key, FrobeniusMatching(a, b)).first;
        return it->second.map_word(eta);
    };
}

// ---- surgery ----

namespace {

struct Replacement {
    int begin = 0, end = 0;
    std::vector<Point> content;
};

std::vector<Point> slot_content(const Circuit& c, const LoopInfo& l, const Point& shift,
                                int direction) {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(l.end - l.begin));
    for (int i = l.begin; i < l.end; ++i) {
        if (direction > 0)
            out.push_back(add(c.word[i], shift));
        else if (direction < 0)
            out.push_back(sub(c.word[i], shift));
        else
            out.push_back(c.word[i]);
    }
    return out;
}

Circuit splice(const Circuit& c, std::vector<Replacement> reps) {
    std::sort(reps.begin(), reps.end(),
              [](const Replacement& a, const Replacement& b) { return a.begin < b.begin; });
    Circuit out;
    out.dim = c.dim;
    out.long_jump_budget = c.long_jump_budget;
    out.word.reserve(c.word.size());
    int pos = 0;
    for (const auto& r : reps) {
        for (; pos < r.begin; ++pos) out.word.push_back(c.word[static_cast<std::size_t>(pos)]);
        out.word.insert(out.word.end(), r.content.begin(), r.content.end());
        pos = r.end;
    }
    for (; pos < static_cast<int>(c.word.size()); ++pos)
        out.word.push_back(c.word[static_cast<std::size_t>(pos)]);
    return out;
}

// Singleton-block proper loops of one type, in word order.
std::vector<int> type_slots(const LoopAnnotation& ann, const std::pair<Point, Point>& type) {
    std::vector<int> slots;
    for (std::size_t i = 0; i < ann.loops.size(); ++i) {
        const LoopInfo& l = ann.loops[i];
        if (!l.pair_member || l.block < 0) continue;
        if (ann.blocks[static_cast<std::size_t>(l.block)].n_loops != 1) continue;
        if (l.base_type != type) continue;
        slots.push_back(static_cast<int>(i));
    }
    return slots;
}

void proper_replacements(const Circuit& c, const LoopAnnotation& ann, const SurgeryContext& ctx,
                         const std::vector<int>& slots, const MatchingProvider& phi,
                         std::vector<Replacement>& reps) {
    std::vector<int> c_slots, t_slots;
    for (int s : slots)
        (ann.loops[static_cast<std::size_t>(s)].in_c ? c_slots : t_slots).push_back(s);
    const int a = static_cast<int>(c_slots.size());
    const int b = static_cast<int>(t_slots.size());
    if (a == 0 && b == 0) return;

    auto loop_at = [&](int s) -> const LoopInfo& { return ann.loops[static_cast<std::size_t>(s)]; };

    if (a >= b) {
        const int len = a + b;
        std::uint32_t eta = 0;
        for (std::size_t j = 0; j < slots.size(); ++j)
            if (loop_at(slots[j]).in_c) eta |= 1u << (len - 1 - static_cast<int>(j));
        std::uint32_t zeta = phi(eta, a, b);
        std::vector<int> zeta_ones, zeta_zeros;
        for (int j = 0; j < len; ++j)
            ((zeta & (1u << (len - 1 - j))) ? zeta_ones : zeta_zeros).push_back(j);
        if (static_cast<int>(zeta_zeros.size()) != a || static_cast<int>(zeta_ones.size()) != b)
            throw std::logic_error("surgery: matching image has the wrong composition");
        // i-th C loop -> translate, placed at the i-th zero of zeta
        for (int i = 0; i < a; ++i) {
            const LoopInfo& src = loop_at(c_slots[static_cast<std::size_t>(i)]);
            const LoopInfo& dst = loop_at(slots[static_cast<std::size_t>(zeta_zeros[static_cast<std::size_t>(i)])]);
            reps.push_back({dst.begin, dst.end, slot_content(c, src, ctx.shift, +1)});
        }
        // i-th translate loop -> pulled back, placed at the i-th one of zeta
        for (int i = 0; i < b; ++i) {
            const LoopInfo& src = loop_at(t_slots[static_cast<std::size_t>(i)]);
            const LoopInfo& dst = loop_at(slots[static_cast<std::size_t>(zeta_ones[static_cast<std::size_t>(i)])]);
            reps.push_back({dst.begin, dst.end, slot_content(c, src, ctx.shift, -1)});
        }
    } else {
        // deficit: only the first a loops on each side trade places
        for (int i = 0; i < a; ++i) {
            const LoopInfo& cl = loop_at(c_slots[static_cast<std::size_t>(i)]);
            const LoopInfo& tl = loop_at(t_slots[static_cast<std::size_t>(i)]);
            reps.push_back({tl.begin, tl.end, slot_content(c, cl, ctx.shift, +1)});
            reps.push_back({cl.begin, cl.end, slot_content(c, tl, ctx.shift, -1)});
        }
    }
}

void block_replacements(const Circuit& c, const LoopAnnotation& ann, const SurgeryContext& ctx,
                        const Block& blk, std::vector<Replacement>& reps) {
    std::vector<int> cs, ts;
    for (int j = blk.first_loop; j < blk.first_loop + blk.n_loops; ++j)
        (ann.loops[static_cast<std::size_t>(j)].in_c ? cs : ts).push_back(j);
    const auto& loops = ann.loops;
    auto content = [&](int idx, int dir) {
        return slot_content(c, loops[static_cast<std::size_t>(idx)], ctx.shift, dir);
    };
    auto slot = [&](int idx) {
        const LoopInfo& l = loops[static_cast<std::size_t>(idx)];
        return std::make_pair(l.begin, l.end);
    };
    const int nc = static_cast<int>(cs.size()), nt = static_cast<int>(ts.size());
    if (nc == nt) {
        // pairwise swap, each slot keeps its side
        for (int i = 0; i < nc; ++i) {
            auto [tb, te] = slot(ts[static_cast<std::size_t>(i)]);
            reps.push_back({tb, te, content(cs[static_cast<std::size_t>(i)], +1)});
            auto [cb, ce] = slot(cs[static_cast<std::size_t>(i)]);
            reps.push_back({cb, ce, content(ts[static_cast<std::size_t>(i)], -1)});
        }
    } else if (nc > nt) {
        // surplus of C loops: translate everything in place
        for (int j = blk.first_loop; j < blk.first_loop + blk.n_loops; ++j) {
            auto [b, e] = slot(j);
            reps.push_back({b, e, content(j, loops[static_cast<std::size_t>(j)].in_c ? +1 : -1)});
        }
    } else {
        // surplus of translate loops: the first stays, the rest swap pairwise
        for (int i = 0; i < nc; ++i) {
            auto [tb, te] = slot(ts[static_cast<std::size_t>(i + 1)]);
            reps.push_back({tb, te, content(cs[static_cast<std::size_t>(i)], +1)});
            auto [cb, ce] = slot(cs[static_cast<std::size_t>(i)]);
            reps.push_back({cb, ce, content(ts[static_cast<std::size_t>(i + 1)], -1)});
        }
    }
}

}  // namespace

Circuit surgery_proper(const Circuit& c, const LoopAnnotation& ann, const SurgeryContext& ctx,
                       const std::pair<Point, Point>& type, const MatchingProvider& phi) {
    validate(ctx);
    std::vector<Replacement> reps;
    proper_replacements(c, ann, ctx, type_slots(ann, type), phi, reps);
    return splice(c, std::move(reps));
}

Circuit surgery_improper(const Circuit& c, const LoopAnnotation& ann, const SurgeryContext& ctx) {
    validate(ctx);
    std::vector<Replacement> reps;
    for (const auto& blk : ann.blocks)
        if (blk.n_loops >= 2) block_replacements(c, ann, ctx, blk, reps);
    return splice(c, std::move(reps));
}

Circuit apply_surgery(const Circuit& c, const SurgeryContext& ctx, const MatchingProvider& phi) {
    LoopAnnotation ann = annotate(c, ctx);
    std::vector<Replacement> reps;
    for (const auto& blk : ann.blocks)
        if (blk.n_loops >= 2) block_replacements(c, ann, ctx, blk, reps);
    // types present among the standalone slots, in deterministic order
    std::map<std::pair<Point, Point>, std::vector<int>> by_type;
    for (std::size_t i = 0; i < ann.loops.size(); ++i) {
        const LoopInfo& l = ann.loops[i];
        if (!l.pair_member || l.block < 0) continue;
        if (ann.blocks[static_cast<std::size_t>(l.block)].n_loops != 1) continue;
        by_type[l.base_type].push_back(static_cast<int>(i));
    }
    for (const auto& [type, slots] : by_type) proper_replacements(c, ann, ctx, slots, phi, reps);
    return splice(c, std::move(reps));
}

namespace {

std::string word_key(const Circuit& c) {
    std::ostringstream out;
    for (const auto& p : c.word) {
        for (int i = 0; i < c.dim; ++i) out << p[i] << ',';
        out << ';';
    }
    return out.str();
}

}  // namespace

AuditReport preimage_audit(const std::vector<Circuit>& family, const SurgeryContext& ctx,
                           const MatchingProvider& phi) {
    validate(ctx);
    const std::uint64_t n_types =
        static_cast<std::uint64_t>(ctx.covers[ctx.c_index].size()) *
        static_cast<std::uint64_t>(ctx.covers[ctx.c_index].size());
    struct Cell {
        std::size_t count = 0;
        int max_improper = 0;
    };
    std::map<std::string, Cell> images;
    for (const auto& c : family) {
        LoopAnnotation ann = annotate(c, ctx);
        Circuit img = apply_surgery(c, ctx, phi);
        Cell& cell = images[word_key(img)];
        ++cell.count;
        cell.max_improper = std::max(cell.max_improper, ann.improper_count());
    }
    AuditReport rep;
    rep.family_size = family.size();
    rep.image_count = images.size();
    for (const auto& [key, cell] : images) {
        std::uint64_t bound = 1;
        if (n_types < 63) bound <<= n_types;
        else bound = UINT64_MAX;
        if (cell.max_improper < 63 && bound != UINT64_MAX) {
            std::uint64_t ib = 1ull << cell.max_improper;
            bound = (bound > UINT64_MAX / ib) ? UINT64_MAX : bound * ib;
        }
        if (cell.count > rep.max_preimages) {
            rep.max_preimages = cell.count;
            rep.worst.clear();
        }
        if (cell.count == rep.max_preimages && rep.worst.size() < 10)
            rep.worst.push_back({key, cell.count, cell.max_improper, bound});
        if (cell.count > bound) rep.within_bound = false;
    }
    return rep;
}

std::string AuditReport::to_csv() const {
    std::ostringstream out;
    out << "family_size,image_count,max_preimages,within_bound\n";
    out << family_size << ',' << image_count << ',' << max_preimages << ','
        << (within_bound ? 1 : 0) << "\n";
    return out.str();
}

// ---- trip weights ----

TripWeightEstimate trip_weight_mc(const Point& x, const Point& y, const PointSet& marked, int dim,
                                  std::int64_t horizon, std::uint64_t samples, std::uint64_t seed,
                                  std::uint64_t stream_base) {
    std::unordered_map<Point, char, PointHash> in_marked;
    for (const auto& p : marked) in_marked[p] = 1;
    struct Acc {
        std::uint64_t hit_y = 0;
        std::uint64_t censored = 0;
    };
    const std::uint32_t card = 2u * static_cast<std::uint32_t>(dim) + 1u;
    Acc total = parallel_fold<Acc>(
        samples, 4096, Acc{},
        [&](std::uint64_t i, Acc& acc) {
            Rng rng(seed, stream_base + i);
            Point pos = x;
            for (std::int64_t k = 1;; ++k) {
                if (k > horizon) {
                    ++acc.censored;
                    return;
                }
                std::uint32_t r = rng.bounded(card);
                if (r != 0) {
                    std::uint32_t axis = (r - 1) >> 1;
                    pos[axis] += (r & 1u) ? 1 : -1;
                }
                if (in_marked.count(pos)) {
                    if (pos == y) ++acc.hit_y;
                    return;
                }
            }
        },
        [](Acc& a, const Acc& b) {
            a.hit_y += b.hit_y;
            a.censored += b.censored;
        });
    TripWeightEstimate est;
    est.samples = samples;
    if (samples > 0) {
        double p = static_cast<double>(total.hit_y) / static_cast<double>(samples);
        est.p_hat = p;
        est.stderr_ = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
        est.censored_fraction =
            static_cast<double>(total.censored) / static_cast<double>(samples);
    }
    return est;
}

// ---- serialization ----

std::string LoopAnnotation::to_json(const Circuit& c) const {
    nlohmann::json j;
    nlohmann::json jl = nlohmann::json::array();
    for (const auto& l : loops) {
        nlohmann::json e;
        e["begin"] = l.begin;
        e["end"] = l.end;
        e["cluster"] = l.cluster;
        e["pair_member"] = l.pair_member;
        if (l.pair_member) {
            e["side"] = l.in_c ? "C" : "T";
            e["proper"] = l.proper;
            e["block"] = l.block;
            nlohmann::json t = nlohmann::json::array();
            for (int i = 0; i < c.dim; ++i) t.push_back(l.base_type.first[i]);
            nlohmann::json t2 = nlohmann::json::array();
            for (int i = 0; i < c.dim; ++i) t2.push_back(l.base_type.second[i]);
            e["type"] = {{"entry", t}, {"exit", t2}};
        }
        jl.push_back(e);
    }
    j["loops"] = jl;
    j["improper_count"] = improper_count();
    return j.dump(2);
}

std::string circuit_to_json(const Circuit& c) {
    nlohmann::json j;
    j["dim"] = c.dim;
    j["long_jump_budget"] = c.long_jump_budget;
    nlohmann::json w = nlohmann::json::array();
    for (const auto& p : c.word) {
        nlohmann::json pt = nlohmann::json::array();
        for (int i = 0; i < c.dim; ++i) pt.push_back(p[i]);
        w.push_back(pt);
    }
    j["word"] = w;
    return j.dump(2);
}

Circuit circuit_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Circuit c;
    c.dim = j.at("dim").get<int>();
    c.long_jump_budget = j.value("long_jump_budget", std::int64_t{-1});
    for (const auto& pt : j.at("word")) {
        Point p{};
        for (int i = 0; i < c.dim; ++i) p[i] = pt.at(i).get<std::int64_t>();
        c.word.push_back(p);
    }
    return c;
}

}  // namespace siltlab
