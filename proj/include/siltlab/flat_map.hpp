#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "siltlab/lattice.hpp"
#include "siltlab/rng.hpp"

namespace siltlab {

// Open-addressing count map keyed by lattice site. Sites are zigzag-packed
// into one 64-bit word (64/dim bits per coordinate), so a slot is 16 bytes
// and probing stays cache-friendly; the rare site outside the packed range
// spills into a node map. Slots with value zero are free, which works
// because occupation counts are strictly positive.
class FlatCountMap {
  public:
    explicit FlatCountMap(int dim = 1) : dim_(dim), bits_(64 / dim) { slots_.resize(kMinCap); }

    std::int64_t increment(const Point& key) {
        std::uint64_t packed;
        if (!pack(key, packed)) return spill_[key]++;
        if ((size_ + 1) * 10 >= slots_.size() * 7) grow();
        Slot& s = probe(packed);
        std::int64_t prior = s.value;
        if (prior == 0) {
            s.key = packed;
            ++size_;
        }
        ++s.value;
        return prior;
    }

    void add(const Point& key, std::int64_t amount) {
        if (amount <= 0) return;
        std::uint64_t packed;
        if (!pack(key, packed)) {
            spill_[key] += amount;
            return;
        }
        if ((size_ + 1) * 10 >= slots_.size() * 7) grow();
        Slot& s = probe(packed);
        if (s.value == 0) {
            s.key = packed;
            ++size_;
        }
        s.value += amount;
    }

    std::int64_t count(const Point& key) const {
        std::uint64_t packed;
        if (!pack(key, packed)) {
            auto it = spill_.find(key);
            return it == spill_.end() ? 0 : it->second;
        }
        std::size_t mask = slots_.size() - 1;
        std::size_t i = hash(packed) & mask;
        for (;;) {
            const Slot& s = slots_[i];
            if (s.value == 0) return 0;
            if (s.key == packed) return s.value;
            i = (i + 1) & mask;
        }
    }

    std::size_t size() const { return size_ + spill_.size(); }

    template <class F>
    void for_each(F&& f) const {
        for (const Slot& s : slots_)
            if (s.value != 0) f(unpack(s.key), s.value);
        for (const auto& [p, c] : spill_) f(p, c);
    }

  private:
    struct Slot {
        std::uint64_t key = 0;
        std::int64_t value = 0;
    };
    static constexpr std::size_t kMinCap = 64;

    bool pack(const Point& p, std::uint64_t& out) const {
        if (bits_ >= 64) {
            std::uint64_t x = static_cast<std::uint64_t>(p[0]);
            out = (x << 1) ^ static_cast<std::uint64_t>(p[0] >> 63);
            return true;
        }
        std::uint64_t packed = 0;
        for (int i = 0; i < dim_; ++i) {
            std::uint64_t z = (static_cast<std::uint64_t>(p[i]) << 1) ^
                              static_cast<std::uint64_t>(p[i] >> 63);
            if (z >> bits_) return false;
            packed |= z << (i * bits_);
        }
        out = packed;
        return true;
    }

    Point unpack(std::uint64_t packed) const {
        Point p{};
        if (bits_ >= 64) {
            std::uint64_t z = packed;
            p[0] = static_cast<std::int64_t>((z >> 1) ^ (~(z & 1) + 1));
            return p;
        }
        const std::uint64_t field_mask = (1ULL << bits_) - 1;
        for (int i = 0; i < dim_; ++i) {
            std::uint64_t z = (packed >> (i * bits_)) & field_mask;
            p[i] = static_cast<std::int64_t>((z >> 1) ^ (~(z & 1) + 1));
        }
        return p;
    }

    static std::uint64_t hash(std::uint64_t x) {
        std::uint64_t s = x;
        return splitmix64(s);
    }

    Slot& probe(std::uint64_t packed) {
        std::size_t mask = slots_.size() - 1;
        std::size_t i = hash(packed) & mask;
        for (;;) {
            Slot& s = slots_[i];
            if (s.value == 0 || s.key == packed) return s;
            i = (i + 1) & mask;
        }
    }

    void grow() {
        std::vector<Slot> old = std::move(slots_);
        slots_.assign(old.size() * 2, Slot{});
        for (const Slot& s : old) {
            if (s.value == 0) continue;
            std::size_t mask = slots_.size() - 1;
            std::size_t i = hash(s.key) & mask;
            while (slots_[i].value != 0) i = (i + 1) & mask;
            slots_[i] = s;
        }
    }

    int dim_;
    int bits_;
    std::size_t size_ = 0;
    std::vector<Slot> slots_;
    std::unordered_map<Point, std::int64_t, PointHash> spill_;
};

}  // namespace siltlab
