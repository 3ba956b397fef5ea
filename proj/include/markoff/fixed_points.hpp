#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "markoff/graph.hpp"
#include "markoff/surface.hpp"
#include "markoff/words.hpp"

#include <json.hpp>

namespace markoff {

// ---------------------------------------------------------------------------
// Exact fixed-point counts of words acting on the k = 0 surface.
// ---------------------------------------------------------------------------

inline std::size_t fix_count(const Word& w, const SurfaceIndex& idx) {
    if (w.empty()) return idx.size();
    const PrimeContext& ctx = idx.ctx();
    std::atomic<std::size_t> total{0};
    parallel_for(idx.size(), [&](std::size_t lo, std::size_t hi) {
        std::size_t local = 0;
        for (std::size_t v = lo; v < hi; ++v) {
            const MarkoffTriple& t = idx.vertex(v);
            if (apply_word(w, t, ctx) == t) ++local;
        }
        total += local;
    });
    return total.load();
}

// ---------------------------------------------------------------------------
// Conic sections C(x): the x-slice y^2 - xy z + z^2 = -x^2 of the surface.
// x is hyperbolic / elliptic / parabolic as x^2 - 4 is a nonzero square /
// a non-square / zero.  x = 0 is kept apart: kappa(0) = 0 degenerates the
// parametrization, and C(0) is the pair of lines z = +-iy (minus the origin)
// when -1 is a square, empty otherwise.
// ---------------------------------------------------------------------------

enum class ConicKind { Parabolic, Hyperbolic, Elliptic, DegenerateZero };

struct ConicClass {
    uint64_t x = 0;
    ConicKind kind = ConicKind::Hyperbolic;
    uint64_t w = 0;     // hyperbolic witness, w + w^-1 = x
    Fp2Element v;       // elliptic witness, v + v^-1 = x, v^(p+1) = 1
};

inline ConicClass classify_x(uint64_t x, const PrimeContext& ctx) {
    ConicClass c;
    c.x = x % ctx.p();
    if (c.x == 0) {
        c.kind = ConicKind::DegenerateZero;
        return c;
    }
    uint64_t disc = ctx.sub(ctx.mul(c.x, c.x), 4 % ctx.p());
    if (disc == 0) {
        c.kind = ConicKind::Parabolic;
        return c;
    }
    if (ctx.legendre(disc) == 1) {
        c.kind = ConicKind::Hyperbolic;
        c.w = ctx.halve(ctx.add(c.x, ctx.sqrt_mod(disc)));
        return c;
    }
    c.kind = ConicKind::Elliptic;
    // v = (x + t s)/2 with t^2 r = disc; norm(v) = (x^2 - disc)/4 = 1
    uint64_t t = ctx.sqrt_mod(ctx.mul(disc, ctx.inv(ctx.nonresidue())));
    c.v = {ctx.halve(c.x), ctx.halve(t)};
    return c;
}

// Number of surface points with first coordinate x, counted from the index.
inline std::size_t conic_size(uint64_t x, const SurfaceIndex& idx) {
    auto [lo, hi] = idx.x_slice(x % idx.p());
    return hi - lo;
}

// ---------------------------------------------------------------------------
// rot: (x, y, z) -> (x, xy - z, y).  Not itself a word in the moves, but
// rot^2 = m2 o m3, and rot acts on each conic C(x) as multiplication by the
// parametrization root.
// ---------------------------------------------------------------------------

inline MarkoffTriple rot_apply(const MarkoffTriple& t, const PrimeContext& ctx) {
    return {t.x, ctx.sub(ctx.mul(t.x, t.y), t.z), t.y};
}

inline std::size_t rot_fix_count_scan(uint64_t n, const SurfaceIndex& idx) {
    const PrimeContext& ctx = idx.ctx();
    std::atomic<std::size_t> total{0};
    parallel_for(idx.size(), [&](std::size_t lo, std::size_t hi) {
        std::size_t local = 0;
        for (std::size_t v = lo; v < hi; ++v) {
            const MarkoffTriple& t = idx.vertex(v);
            MarkoffTriple u = t;
            for (uint64_t i = 0; i < n; ++i) u = rot_apply(u, ctx);
            if (u == t) ++local;
        }
        total += local;
    });
    return total.load();
}

// Conic-by-conic count: a conic is fixed by rot^n entirely or not at all.
//  - hyperbolic x: fixed iff w^n = 1, contributes p - 1
//  - elliptic x:   fixed iff v^n = 1, contributes p + 1
//  - x = 2 (p = 1 mod 4): rot preserves each line z = y -+ 2i and shifts t
//    by -+2i, so C(2) is fixed iff p | n
//  - x = -2: rot swaps the two lines z = -y +- 2i (direct computation from
//    rot's definition; odd powers fix nothing) and rot^2 shifts by 4i, so
//    C(-2) is fixed iff n is even and p | n
//  - x = 0 (p = 1 mod 4): rot multiplies each line z = +-iy by -+i, so the
//    2(p-1) nonzero points are fixed iff 4 | n
inline std::size_t rot_fix_count_oracle(uint64_t n, const SurfaceIndex& idx) {
    const PrimeContext& ctx = idx.ctx();
    uint64_t p = ctx.p();
    std::size_t total = 0;
    for (uint64_t x = 0; x < p; ++x) {
        ConicClass c = classify_x(x, ctx);
        switch (c.kind) {
            case ConicKind::DegenerateZero:
                if (ctx.legendre_minus_one() == 1 && n % 4 == 0) total += conic_size(x, idx);
                break;
            case ConicKind::Parabolic:
                if (c.x == 2) {
                    if (n % p == 0) total += conic_size(x, idx);
                } else {
                    if (n % 2 == 0 && n % p == 0) total += conic_size(x, idx);
                }
                break;
            case ConicKind::Hyperbolic:
                if (ctx.pow(c.w, n) == 1) total += p - 1;
                break;
            case ConicKind::Elliptic:
                if (fp2_pow(c.v, n, ctx) == fp2_from(1)) total += p + 1;
                break;
        }
    }
    return total;
}

// Computes Fix(rot^n) by direct scan and by the conic oracle; a mismatch is
// an internal consistency failure, never silently resolved.
inline std::size_t rot_fix_count(uint64_t n, const SurfaceIndex& idx) {
    std::size_t scan = rot_fix_count_scan(n, idx);
    std::size_t oracle = rot_fix_count_oracle(n, idx);
    if (scan != oracle)
        throw DisagreementError("rot fix count mismatch at n=" + std::to_string(n) +
                                " p=" + std::to_string(idx.p()) + ": scan=" + std::to_string(scan) +
                                " oracle=" + std::to_string(oracle));
    return scan;
}

// ---------------------------------------------------------------------------
// Bound verification for a word: the fixed-point theorem bound
// 1024 p max(|a|,|b|,|c|,|d|)^8 under its hypothesis, the CGMP bound when
// the classified power has all entries >= 2, the torsion bound < p, and the
// parabolic bound < 2|n|p.  Reports record applicability honestly; a
// violated applicable bound throws.
// ---------------------------------------------------------------------------

struct BoundCheck {
    std::string name;
    bool applicable = false;
    double value = 0; // bound value (reported even when inapplicable)
    bool satisfied = true;
};

struct FixReport {
    Word word;
    uint64_t p = 0;
    std::size_t fix = 0;
    Mat2 matrix;
    PowerClassification classification;
    bool bound_applicable = false; // theorem-branch hypothesis
    i128 bound_value = 0;          // exact theorem bound when applicable
    std::vector<BoundCheck> bounds;
};

inline nlohmann::json fix_report_json(const FixReport& r) {
    nlohmann::json j;
    j["word"] = r.word.str();
    j["p"] = r.p;
    j["fix_count"] = r.fix;
    j["matrix"] = r.matrix.str();
    switch (r.classification.cls) {
        case PowerClass::Generic: j["class"] = "Generic"; break;
        case PowerClass::Torsion: j["class"] = "Torsion"; break;
        case PowerClass::StandardParabolic:
            j["class"] = "StandardParabolic";
            j["n"] = to_string(r.classification.n);
            j["side"] = r.classification.side == ParabolicSide::Upper ? "upper" : "lower";
            j["sign"] = r.classification.sign;
            break;
    }
    j["K"] = r.classification.K;
    nlohmann::json bs = nlohmann::json::array();
    for (const auto& b : r.bounds)
        bs.push_back({{"name", b.name}, {"applicable", b.applicable}, {"value", b.value}, {"satisfied", b.satisfied}});
    j["bounds"] = bs;
    return j;
}

inline FixReport verify_bounds(const Word& w, const SurfaceIndex& idx) {
    if (w.empty()) throw IdentityInputError("verify_bounds needs a nonidentity word");
    FixReport r;
    r.word = w;
    r.p = idx.p();
    r.fix = fix_count(w, idx);
    r.matrix = word_to_matrix(w);
    r.classification = classify_power(r.matrix);

    uint64_t p = idx.p();
    i128 maxe = max_entry(r.matrix);

    // theorem: hypothesis 128 max^8 <= p, bound 1024 p max^8
    {
        BoundCheck b{"theorem"};
        bool hyp = false;
        double approx = 1024.0 * double(p);
        {
            long double m = (long double)(maxe);
            long double m8 = m * m;
            m8 = m8 * m8;
            m8 = m8 * m8;
            approx *= double(m8);
            if (m8 * 128.0L <= (long double)(p)) hyp = true;
        }
        b.applicable = hyp;
        b.value = approx;
        if (hyp) {
            i128 m8 = checked_mul(maxe, maxe);
            m8 = checked_mul(m8, m8);
            m8 = checked_mul(m8, m8);
            r.bound_value = checked_mul(checked_mul(i128(1024), i128(p)), m8);
            b.satisfied = i128(r.fix) <= r.bound_value;
        }
        r.bound_applicable = hyp;
        r.bounds.push_back(b);
    }

    Mat2 h = mat_pow(r.matrix, r.classification.K);

    // cgmp: all entries of the classified power >= 2 in absolute value
    {
        BoundCheck b{"cgmp"};
        if (min_entry(h) >= 2) {
            b.applicable = true;
            i128 gap = abs128(abs128(h.d) - abs128(h.c));
            i128 val = checked_mul(i128(2) * i128(p), checked_add(checked_add(abs128(h.a), abs128(h.b)), gap));
            b.value = double(val);
            b.satisfied = i128(r.fix) < val;
        }
        r.bounds.push_back(b);
    }

    // torsion: conjugates of a generator have fewer than p fixed points
    {
        BoundCheck b{"torsion"};
        b.value = double(p);
        if (is_torsion(w)) {
            b.applicable = true;
            b.satisfied = r.fix < p;
        }
        r.bounds.push_back(b);
    }

    // parabolic: +-[[1,n],[0,1]]-type powers have fewer than 2|n|p fixed points
    {
        BoundCheck b{"parabolic"};
        if (r.classification.cls == PowerClass::StandardParabolic &&
            abs128(r.classification.n) <= i128(p)) {
            b.applicable = true;
            i128 val = checked_mul(i128(2) * abs128(r.classification.n), i128(p));
            b.value = double(val);
            b.satisfied = i128(r.fix) < val;
        }
        r.bounds.push_back(b);
    }

    for (const auto& b : r.bounds)
        if (b.applicable && !b.satisfied)
            throw BoundViolatedError("bound violated: " + fix_report_json(r).dump());
    return r;
}

} // namespace markoff
