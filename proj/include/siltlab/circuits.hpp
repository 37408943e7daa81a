#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "siltlab/lattice.hpp"
#include "siltlab/walk.hpp"

namespace siltlab {

// Candidate local times over a marked set: admissible when every site of the
// inner set gets at least sqrt(n)/A visits, no site of the full set exceeds
// A*sqrt(n), and the inner squares sum to at least n*xi.
struct VisitVector {
    int dim = 1;
    std::unordered_map<Point, std::int64_t, PointHash> targets;
    double A = 2.0;
    double n = 0.0;
    double xi = 1.0;

    std::int64_t total() const;  // |k|
};

bool visit_vector_admissible(const VisitVector& k, const PointSet& inner);

// Ordered string of visited marked sites.
struct Circuit {
    int dim = 1;
    std::vector<Point> word;
    std::int64_t long_jump_budget = -1;  // -1 = unconstrained
};

// number of consecutive pairs at l1 distance > sqrt(scale)
std::int64_t long_jump_count(const Circuit& c, std::int64_t scale);
bool circuit_matches(const Circuit& c, const VisitVector& k);

// Visits of the marked set among S_0..S_{n-1}, in time order.
Circuit extract_circuit(const WalkPath& path, const PointSet& marked);

// Covering of the marked set by clusters, with one designated
// cluster/translate pair (everything the surgery maps need).
struct SurgeryContext {
    int dim = 1;
    std::vector<PointSet> covers;  // disjoint site sets, each sorted
    std::size_t c_index = 0;       // the designated cluster C
    std::size_t t_index = 0;       // its translate T(C) = C + shift
    Point shift{};
};

void validate(const SurgeryContext& ctx);

struct LoopInfo {
    int begin = 0, end = 0;  // [begin, end) in the word
    int cluster = -1;
    bool pair_member = false;  // lives in C or T(C)
    bool in_c = false;         // C side
    Point entry{}, exit{};
    std::pair<Point, Point> base_type{};  // (entry, exit) pulled back to C
    bool proper = false;
    int block = -1;  // index into blocks, -1 for loops of other clusters
};

// A block is a maximal run of consecutive C / T(C) loops; its first loop is
// proper, the others improper. Blocks of length one are the slots the
// type-wise map acts on; longer blocks belong to the improper-loop map.
struct Block {
    int first_loop = 0;
    int n_loops = 0;
};

struct LoopAnnotation {
    std::vector<LoopInfo> loops;  // tiles the word
    std::vector<Block> blocks;
    // proper-loop counts per base type: (C side, translate side)
    std::map<std::pair<Point, Point>, std::pair<int, int>> nu;

    int improper_count() const;
    std::string to_json(const Circuit& c) const;
};

LoopAnnotation annotate(const Circuit& c, const SurgeryContext& ctx);

// ---- binary words and the dominance matching ----

// Words of length n+m with n ones, packed with the leftmost symbol in the
// highest bit. Enumeration follows the lexicographic order of the one
// position sets, e.g. (2,1) -> 110, 101, 011.
std::vector<std::uint32_t> omega_enumerate(int n, int m);
std::string word_to_string(std::uint32_t mask, int length);
inline bool dominates(std::uint32_t eta, std::uint32_t zeta) { return (zeta & ~eta) == 0; }

// Perfect matching between Omega_{n,m} and Omega_{m,n} along dominance edges
// (a one may turn into a zero, never the reverse). Built by augmenting-path
// search over the canonical enumeration order; phi_{n,n} is the identity.
class FrobeniusMatching {
  public:
    FrobeniusMatching(int n, int m);

    int n() const { return n_; }
    int m() const { return m_; }
    const std::vector<std::uint32_t>& left() const { return left_; }
    const std::vector<std::uint32_t>& right() const { return right_; }
    std::uint32_t map_word(std::uint32_t eta) const;
    bool verify() const;  // bijection + pointwise dominance
    std::string to_json() const;

  private:
    int n_, m_;
    std::vector<std::uint32_t> left_, right_;
    std::vector<std::size_t> match_;  // left index -> right index
    std::unordered_map<std::uint32_t, std::size_t> left_rank_;
};

FrobeniusMatching frobenius_matching(int n, int m);

// ---- surgery ----

// Provides phi_{a,b} for whatever sizes the circuit at hand needs; the
// default builds and caches matchings on demand.
using MatchingProvider = std::function<std::uint32_t(std::uint32_t eta, int a, int b)>;
MatchingProvider default_matching_provider();

// Acts on the proper loops of one type that stand alone between outside
// trips. With a >= b occurrences on the C side, contents move according to
// phi_{a,b}; with a < b only the first a loops on each side swap.
Circuit surgery_proper(const Circuit& c, const LoopAnnotation& ann, const SurgeryContext& ctx,
                       const std::pair<Point, Point>& type, const MatchingProvider& phi);

// Rewrites every block of two or more alternating C / T(C) loops. Balanced
// blocks swap pairwise and keep each slot's side; a surplus of C loops is
// translated in place; a surplus of translate loops keeps the first loop and
// swaps the rest.
Circuit surgery_improper(const Circuit& c, const LoopAnnotation& ann, const SurgeryContext& ctx);

// The composed map: improper blocks plus every type present, all slots
// disjoint so they are applied in one splice.
Circuit apply_surgery(const Circuit& c, const SurgeryContext& ctx, const MatchingProvider& phi);

struct AuditEntry {
    std::string image_key;
    std::size_t preimages = 0;
    int max_improper = 0;       // over the sources of this image
    std::uint64_t bound = 0;    // 2^{|C|^2} * 2^{max improper}
};

struct AuditReport {
    std::size_t family_size = 0;
    std::size_t image_count = 0;
    std::size_t max_preimages = 0;
    bool within_bound = true;
    std::vector<AuditEntry> worst;  // entries attaining the max
    std::string to_csv() const;
};

AuditReport preimage_audit(const std::vector<Circuit>& family, const SurgeryContext& ctx,
                           const MatchingProvider& phi);

// ---- trip weights ----

struct TripWeightEstimate {
    double p_hat = 0.0;
    double stderr_ = 0.0;
    double censored_fraction = 0.0;  // samples that never returned within the horizon
    std::uint64_t samples = 0;
};

// P_x(S_T = y) for T the first time >= 1 the walk sits in the marked set,
// truncated at the horizon.
TripWeightEstimate trip_weight_mc(const Point& x, const Point& y, const PointSet& marked, int dim,
                                  std::int64_t horizon, std::uint64_t samples, std::uint64_t seed,
                                  std::uint64_t stream_base = 0);

std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

}  // namespace siltlab
