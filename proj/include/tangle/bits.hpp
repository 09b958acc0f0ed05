#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace tangle {

// Fixed-width id set. Vertex and edge ids of every graph handled by the
// library must stay below kMaxIds.
inline constexpr int kMaxIds = 256;

class IdSet {
public:
    IdSet() = default;
    IdSet(std::initializer_list<int> ids) {
        for (int i : ids) set(i);
    }
    static IdSet of(const std::vector<int>& ids) {
        IdSet s;
        for (int i : ids) s.set(i);
        return s;
    }

    void set(int i) { w_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    bool contains(int i) const { return i >= 0 && i < kMaxIds && test(i); }

    int count() const {
        int c = 0;
        for (auto x : w_) c += std::popcount(x);
        return c;
    }
    bool empty() const { return (w_[0] | w_[1] | w_[2] | w_[3]) == 0; }
    bool any() const { return !empty(); }

    bool intersects(const IdSet& o) const {
        for (int i = 0; i < 4; ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    bool subset_of(const IdSet& o) const {
        for (int i = 0; i < 4; ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    IdSet& operator|=(const IdSet& o) {
        for (int i = 0; i < 4; ++i) w_[i] |= o.w_[i];
        return *this;
    }
    IdSet& operator&=(const IdSet& o) {
        for (int i = 0; i < 4; ++i) w_[i] &= o.w_[i];
        return *this;
    }
    IdSet& operator^=(const IdSet& o) {
        for (int i = 0; i < 4; ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    IdSet& operator-=(const IdSet& o) {
        for (int i = 0; i < 4; ++i) w_[i] &= ~o.w_[i];
        return *this;
    }
    friend IdSet operator|(IdSet a, const IdSet& b) { return a |= b; }
    friend IdSet operator&(IdSet a, const IdSet& b) { return a &= b; }
    friend IdSet operator^(IdSet a, const IdSet& b) { return a ^= b; }
    friend IdSet operator-(IdSet a, const IdSet& b) { return a -= b; }

    friend bool operator==(const IdSet&, const IdSet&) = default;
    friend std::strong_ordering operator<=>(const IdSet& a, const IdSet& b) {
        for (int i = 3; i >= 0; --i)
            if (a.w_[i] != b.w_[i]) return a.w_[i] <=> b.w_[i];
        return std::strong_ordering::equal;
    }

    // Smallest member, or -1.
    int first() const {
        for (int i = 0; i < 4; ++i)
            if (w_[i]) return i * 64 + std::countr_zero(w_[i]);
        return -1;
    }
    // Smallest member greater than i, or -1.
    int next(int i) const {
        ++i;
        if (i >= kMaxIds) return -1;
        int wi = i >> 6;
        std::uint64_t cur = w_[wi] & (~std::uint64_t{0} << (i & 63));
        while (true) {
            if (cur) return wi * 64 + std::countr_zero(cur);
            if (++wi == 4) return -1;
            cur = w_[wi];
        }
    }

    template <class F>
    void for_each(F&& f) const {
        for (int i = 0; i < 4; ++i) {
            std::uint64_t x = w_[i];
            while (x) {
                int b = std::countr_zero(x);
                f(i * 64 + b);
                x &= x - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (auto x : w_) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xbf58476d1ce4e5b9ull;
        }
        return static_cast<std::size_t>(h ^ (h >> 31));
    }

private:
    std::array<std::uint64_t, 4> w_{};
};

using VertexSet = IdSet;
using EdgeSet = IdSet;

struct IdSetHash {
    std::size_t operator()(const IdSet& s) const { return s.hash(); }
};

}  // namespace tangle

template <>
struct std::hash<tangle::IdSet> {
    std::size_t operator()(const tangle::IdSet& s) const { return s.hash(); }
};
