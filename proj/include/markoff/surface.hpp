#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <vector>

#include "markoff/fp.hpp"
#include "markoff/words.hpp"

namespace markoff {

// ---------------------------------------------------------------------------
// Level sets x^2 + y^2 + z^2 = xyz + k over F_p.  For k = 0 the origin is
// excluded (it sits in an orbit of its own).
// ---------------------------------------------------------------------------

struct MarkoffTriple {
    uint64_t x = 0, y = 0, z = 0;

    bool operator==(const MarkoffTriple&) const = default;
    auto operator<=>(const MarkoffTriple&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const MarkoffTriple& t) {
    return os << "(" << t.x << "," << t.y << "," << t.z << ")";
}

// m1: (yz-x, y, z)   m2: (x, xz-y, z)   m3: (x, y, xy-z)
inline MarkoffTriple apply_move(int i, const MarkoffTriple& t, const PrimeContext& ctx) {
    switch (i) {
        case 1: return {ctx.sub(ctx.mul(t.y, t.z), t.x), t.y, t.z};
        case 2: return {t.x, ctx.sub(ctx.mul(t.x, t.z), t.y), t.z};
        case 3: return {t.x, t.y, ctx.sub(ctx.mul(t.x, t.y), t.z)};
        default: throw UsageError("move index must be 1, 2, or 3");
    }
}

inline MarkoffTriple apply_word(const Word& w, MarkoffTriple t, const PrimeContext& ctx) {
    for (uint8_t g : w.letters) t = apply_move(g, t, ctx); // leftmost letter first
    return t;
}

// x^2 + y^2 + z^2 - xyz mod p
inline uint64_t level_value(const MarkoffTriple& t, const PrimeContext& ctx) {
    uint64_t s = ctx.add(ctx.add(ctx.mul(t.x, t.x), ctx.mul(t.y, t.y)), ctx.mul(t.z, t.z));
    return ctx.sub(s, ctx.mul(ctx.mul(t.x, t.y), t.z));
}

class SurfaceIndex {
public:
    SurfaceIndex(const PrimeContext& ctx, uint64_t k, std::vector<MarkoffTriple> vertices)
        : ctx_(&ctx), k_(k % ctx.p()), vertices_(std::move(vertices)) {
        std::sort(vertices_.begin(), vertices_.end());
    }

    const PrimeContext& ctx() const { return *ctx_; }
    uint64_t p() const { return ctx_->p(); }
    uint64_t level() const { return k_; }
    std::size_t size() const { return vertices_.size(); }
    const std::vector<MarkoffTriple>& vertices() const { return vertices_; }
    const MarkoffTriple& vertex(std::size_t id) const { return vertices_[id]; }

    // dense id of a triple; ids are positions in the lexicographic order
    std::size_t id_of(const MarkoffTriple& t) const {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), t);
        if (it == vertices_.end() || !(*it == t))
            throw Error("triple not on surface");
        return std::size_t(it - vertices_.begin());
    }

    bool contains(const MarkoffTriple& t) const {
        return std::binary_search(vertices_.begin(), vertices_.end(), t);
    }

    // [first, last) ids of vertices with first coordinate x
    std::pair<std::size_t, std::size_t> x_slice(uint64_t x) const {
        MarkoffTriple lo{x, 0, 0};
        MarkoffTriple hi{x + 1, 0, 0};
        auto a = std::lower_bound(vertices_.begin(), vertices_.end(), lo);
        auto b = std::lower_bound(vertices_.begin(), vertices_.end(), hi);
        return {std::size_t(a - vertices_.begin()), std::size_t(b - vertices_.begin())};
    }

private:
    const PrimeContext* ctx_;
    uint64_t k_;
    std::vector<MarkoffTriple> vertices_;
};

// Enumerates the level set in O(p^2): for each (x, y) the equation is a
// quadratic in z, namely z^2 - xy z + (x^2 + y^2 - k) = 0, decided through
// a precomputed square-root table.
inline SurfaceIndex enumerate_surface(const PrimeContext& ctx, uint64_t k) {
    uint64_t p = ctx.p();
    if (p >> 21) throw TooLargeError("surface enumeration needs p^2 memory; p >= 2^21 rejected");
    k %= p;

    // sqrt table: sq[a] = smaller root of a, or p when a is a non-residue
    std::vector<uint32_t> sq(p, uint32_t(p));
    for (uint64_t t = 0; t <= p / 2; ++t)
        sq[ctx.mul(t, t)] = uint32_t(t);

    std::vector<MarkoffTriple> verts;
    uint64_t expected = p * p + 3 * p + 1; // upper bound across both residue classes
    verts.reserve(expected);
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t x2 = ctx.mul(x, x);
        for (uint64_t y = 0; y < p; ++y) {
            uint64_t b = ctx.mul(x, y); // z^2 - b z + c = 0
            uint64_t c = ctx.add(x2, ctx.mul(y, y));
            if (k) c = ctx.sub(c, k);
            uint64_t disc = ctx.sub(ctx.mul(b, b), ctx.mul(4 % p, c));
            uint32_t root = sq[disc];
            if (root == uint32_t(p)) continue;
            uint64_t z0 = ctx.halve(ctx.add(b, root));
            verts.push_back({x, y, z0});
            if (root != 0) {
                uint64_t z1 = ctx.halve(ctx.sub(b, root));
                verts.push_back({x, y, z1});
            }
        }
    }
    if (k == 0) {
        auto it = std::find(verts.begin(), verts.end(), MarkoffTriple{0, 0, 0});
        if (it != verts.end()) verts.erase(it);
    }
    return SurfaceIndex(ctx, k, std::move(verts));
}

inline void write_surface_csv(const SurfaceIndex& idx, std::ostream& os) {
    os << "x,y,z\n";
    for (const auto& t : idx.vertices())
        os << t.x << "," << t.y << "," << t.z << "\n";
}

} // namespace markoff
