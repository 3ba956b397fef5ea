#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <vector>

#include "markoff/surface.hpp"

namespace markoff {

// ---------------------------------------------------------------------------
// The 3-regular Vieta graph on the k = 0 surface, stored as compressed
// sparse adjacency.  A loop is recorded once: the row of a fixed vertex
// lists the vertex itself, so every row has exactly 3 endpoints and the
// all-ones vector is an eigenvector for eigenvalue 3.
// ---------------------------------------------------------------------------

class MarkoffGraph {
public:
    MarkoffGraph(std::vector<uint32_t> offsets, std::vector<uint32_t> neighbors,
                 std::vector<bool> loop_flags)
        : offsets_(std::move(offsets)), neighbors_(std::move(neighbors)),
          loop_flags_(std::move(loop_flags)) {}

    std::size_t vertex_count() const { return loop_flags_.size(); }

    std::pair<const uint32_t*, const uint32_t*> neighbors(std::size_t v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }

    bool has_loop(std::size_t v) const { return loop_flags_[v]; }

    std::size_t loop_count() const {
        return std::size_t(std::count(loop_flags_.begin(), loop_flags_.end(), true));
    }

    std::size_t endpoint_count() const { return neighbors_.size(); }

private:
    std::vector<uint32_t> offsets_;
    std::vector<uint32_t> neighbors_;
    std::vector<bool> loop_flags_;
};

inline MarkoffGraph build_graph(const SurfaceIndex& idx) {
    if (idx.size() == 0) throw EmptySurfaceError("cannot build graph on empty surface");
    std::size_t n = idx.size();
    std::vector<uint32_t> offsets(n + 1);
    std::vector<uint32_t> neighbors(3 * n);
    std::vector<bool> loops(n, false);
    for (std::size_t v = 0; v <= n; ++v) offsets[v] = uint32_t(3 * v);
    const PrimeContext& ctx = idx.ctx();
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t v = lo; v < hi; ++v) {
            const MarkoffTriple& t = idx.vertex(v);
            for (int i = 1; i <= 3; ++i) {
                std::size_t u = idx.id_of(apply_move(i, t, ctx));
                neighbors[3 * v + std::size_t(i - 1)] = uint32_t(u);
                if (u == v) loops[v] = true;
            }
        }
    });
    return MarkoffGraph(std::move(offsets), std::move(neighbors), std::move(loops));
}

// ---------------------------------------------------------------------------
// Connected components via union-find (path halving, union by size).
// ---------------------------------------------------------------------------

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void join(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

// Sorted component sizes (ascending); sizes sum to |V|.
inline std::vector<std::size_t> components(const MarkoffGraph& g) {
    std::size_t n = g.vertex_count();
    UnionFind uf(n);
    for (std::size_t v = 0; v < n; ++v) {
        auto [first, last] = g.neighbors(v);
        for (const uint32_t* it = first; it != last; ++it)
            uf.join(v, *it);
    }
    std::vector<std::size_t> count(n, 0);
    for (std::size_t v = 0; v < n; ++v) ++count[uf.find(v)];
    std::vector<std::size_t> sizes;
    for (std::size_t c : count)
        if (c > 0) sizes.push_back(c);
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

struct GraphStats {
    std::size_t vertex_count = 0;
    std::size_t loop_count = 0;
    bool triangle_exists = false;
    std::vector<std::size_t> component_sizes;
};

// Closed 3-walks come exactly from fixed points of m_i m_j m_i patterns
// (a fixed point of i-j-i means m_i v carries an m_j loop; distinct-letter
// length-3 words have no fixed points at all).
inline bool find_triangle(const SurfaceIndex& idx) {
    const PrimeContext& ctx = idx.ctx();
    for (std::size_t v = 0; v < idx.size(); ++v) {
        const MarkoffTriple& t = idx.vertex(v);
        for (int i = 1; i <= 3; ++i) {
            MarkoffTriple t1 = apply_move(i, t, ctx);
            for (int j = 1; j <= 3; ++j) {
                if (j == i) continue;
                if (apply_move(i, apply_move(j, t1, ctx), ctx) == t) return true;
            }
        }
    }
    return false;
}

inline GraphStats graph_stats(const SurfaceIndex& idx, const MarkoffGraph& g) {
    GraphStats s;
    s.vertex_count = g.vertex_count();
    s.loop_count = g.loop_count();
    s.triangle_exists = find_triangle(idx);
    s.component_sizes = components(g);
    return s;
}

inline void write_edges_csv(const MarkoffGraph& g, std::ostream& os) {
    os << "src_id,dst_id\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        auto [first, last] = g.neighbors(v);
        for (const uint32_t* it = first; it != last; ++it)
            if (*it >= v) os << v << "," << *it << "\n"; // each undirected edge once
    }
}

} // namespace markoff
