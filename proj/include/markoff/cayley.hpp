#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "markoff/fp.hpp"
#include "markoff/surface.hpp"
#include "markoff/words.hpp"

#include <json.hpp>

namespace markoff {

// ---------------------------------------------------------------------------
// The Cayley cubic x^2 + y^2 + z^2 = xyz + 4 and the monomial form of the
// word action.  A point is a pair (xi, eta) of nonzero F_p^2 elements with
// derived triple
//   x = xi + xi^-1,  y = eta + eta^-1,  z = xi eta + (xi eta)^-1
// which lies on the cubic identically.  When xi and eta are drawn from the
// same torus (F_p^* or the norm-1 subgroup) all three coordinates are
// rational.
// ---------------------------------------------------------------------------

struct CayleyPoint {
    Fp2Element xi, eta;
};

struct CayleyTriple {
    Fp2Element x, y, z;
    bool operator==(const CayleyTriple&) const = default;
};

inline CayleyTriple derived_triple(const CayleyPoint& pt, const PrimeContext& ctx) {
    Fp2Element xi_inv = fp2_inv(pt.xi, ctx);
    Fp2Element eta_inv = fp2_inv(pt.eta, ctx);
    Fp2Element prod = fp2_mul(pt.xi, pt.eta, ctx);
    return {fp2_add(pt.xi, xi_inv, ctx), fp2_add(pt.eta, eta_inv, ctx),
            fp2_add(prod, fp2_inv(prod, ctx), ctx)};
}

inline Fp2Element cayley_level(const CayleyTriple& t, const PrimeContext& ctx) {
    Fp2Element s = fp2_add(fp2_add(fp2_mul(t.x, t.x, ctx), fp2_mul(t.y, t.y, ctx), ctx),
                           fp2_mul(t.z, t.z, ctx), ctx);
    return fp2_sub(s, fp2_mul(fp2_mul(t.x, t.y, ctx), t.z, ctx), ctx);
}

inline CayleyTriple apply_move_fp2(int i, const CayleyTriple& t, const PrimeContext& ctx) {
    switch (i) {
        case 1: return {fp2_sub(fp2_mul(t.y, t.z, ctx), t.x, ctx), t.y, t.z};
        case 2: return {t.x, fp2_sub(fp2_mul(t.x, t.z, ctx), t.y, ctx), t.z};
        case 3: return {t.x, t.y, fp2_sub(fp2_mul(t.x, t.y, ctx), t.z, ctx)};
        default: throw UsageError("move index must be 1, 2, or 3");
    }
}

inline CayleyTriple apply_word_fp2(const Word& w, CayleyTriple t, const PrimeContext& ctx) {
    for (uint8_t g : w.letters) t = apply_move_fp2(g, t, ctx);
    return t;
}

// The monomial map (xi, eta) -> (xi^a eta^c, xi^b eta^d) composes as a right
// action: applying M then N is the map of M N.  The matrix matching the
// leftmost-letter-first word action is therefore the product in letter
// order, not the reversed product used on the trace side.
inline Mat2 monomial_matrix(const Word& w) {
    if (w.length() > kMaxWordLengthForMatrix)
        throw OverflowError("word length exceeds matrix overflow guard");
    Mat2 m = Mat2::identity();
    for (uint8_t g : w.letters)
        m = mat_mul(m, generator_matrix(g));
    return m;
}

inline Fp2Element fp2_signed_pow(const Fp2Element& base, i128 e, uint64_t order,
                                 const PrimeContext& ctx) {
    i128 r = e % i128(order);
    if (r < 0) r += i128(order);
    return fp2_pow(base, uint64_t(r), ctx);
}

// exponents reduced mod the element orders before powering
inline CayleyPoint monomial_action(const Mat2& m, const CayleyPoint& pt, const PrimeContext& ctx) {
    uint64_t oxi = element_order(pt.xi, ctx);
    uint64_t oeta = element_order(pt.eta, ctx);
    Fp2Element nxi = fp2_mul(fp2_signed_pow(pt.xi, m.a, oxi, ctx),
                             fp2_signed_pow(pt.eta, m.c, oeta, ctx), ctx);
    Fp2Element neta = fp2_mul(fp2_signed_pow(pt.xi, m.b, oxi, ctx),
                              fp2_signed_pow(pt.eta, m.d, oeta, ctx), ctx);
    return {nxi, neta};
}

// ---------------------------------------------------------------------------
// Sampling pools: hyperbolic coordinates from F_p^* and elliptic coordinates
// from the norm-1 subgroup of F_p^2 (sizes p - 1 and p + 1).  The map
// u -> u^(p-1) surjects onto the torus with equal fibers.
// ---------------------------------------------------------------------------

template <typename Rng>
Fp2Element random_fp_star(Rng& rng, const PrimeContext& ctx) {
    return fp2_from(1 + uniform_below(rng, ctx.p() - 1));
}

template <typename Rng>
Fp2Element random_norm_one(Rng& rng, const PrimeContext& ctx) {
    for (;;) {
        Fp2Element u{uniform_below(rng, ctx.p()), uniform_below(rng, ctx.p())};
        if (u.is_zero()) continue;
        return fp2_pow(u, ctx.p() - 1, ctx);
    }
}

// Checks that the leftmost-first polynomial action of w on the derived
// triple coincides with the monomial action of its matrix, over `samples`
// random points alternating between the two pools.
inline bool word_action_matches(const Word& w, const PrimeContext& ctx, std::size_t samples,
                                uint64_t seed = 0x9e3779b97f4a7c15ull) {
    if (w.empty()) throw IdentityInputError("word_action_matches needs a nonempty word");
    Mat2 m = monomial_matrix(w);
    std::mt19937_64 rng(seed ^ ctx.p());
    for (std::size_t i = 0; i < samples; ++i) {
        CayleyPoint pt;
        if (i % 2 == 0) {
            pt.xi = random_fp_star(rng, ctx);
            pt.eta = random_fp_star(rng, ctx);
        } else {
            pt.xi = random_norm_one(rng, ctx);
            pt.eta = random_norm_one(rng, ctx);
        }
        CayleyTriple via_moves = apply_word_fp2(w, derived_triple(pt, ctx), ctx);
        CayleyTriple via_monomials = derived_triple(monomial_action(m, pt, ctx), ctx);
        if (!(via_moves == via_monomials)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Free-product witnesses: a point of the Cayley cubic moved by the word.
// The lines eta = 1 and xi = 1 carry the argument pinning the matrix to
// +-diag(1, +-1), but both are pointwise fixed by m3 (z+ = z- there), so a
// generic-eta family is scanned as well; that family separates the
// remaining (x, y, z+) -> (x, y, z-) case.
// ---------------------------------------------------------------------------

inline std::vector<Fp2Element> scan_pool(const PrimeContext& ctx) {
    std::vector<Fp2Element> pool;
    for (uint64_t a = 1; a < ctx.p(); ++a)
        pool.push_back(fp2_from(a));
    for (uint64_t a = 0; a < ctx.p(); ++a)
        for (uint64_t b = 1; b < ctx.p(); ++b) {
            Fp2Element v{a, b};
            if (fp2_norm(v, ctx) == 1) pool.push_back(v);
        }
    return pool;
}

inline std::optional<CayleyPoint> free_product_witness(const Word& w, const PrimeContext& ctx) {
    if (w.empty()) throw IdentityInputError("free_product_witness needs a nonempty word");
    std::vector<Fp2Element> pool = scan_pool(ctx);
    const Fp2Element one = fp2_from(1);

    auto moved = [&](const CayleyPoint& pt) {
        CayleyTriple t0 = derived_triple(pt, ctx);
        return !(apply_word_fp2(w, t0, ctx) == t0);
    };

    for (const Fp2Element& xi : pool) {
        CayleyPoint pt{xi, one};
        if (moved(pt)) return pt;
    }
    for (const Fp2Element& eta : pool) {
        CayleyPoint pt{one, eta};
        if (moved(pt)) return pt;
    }
    // generic family: a few eta of order > 2 against the full xi pool
    std::size_t used = 0;
    for (const Fp2Element& eta : pool) {
        if (element_order(eta, ctx) <= 2) continue;
        for (const Fp2Element& xi : pool) {
            CayleyPoint pt{xi, eta};
            if (moved(pt)) return pt;
        }
        if (++used >= 4) break;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Verification summary across all reduced words up to a length cap.
// ---------------------------------------------------------------------------

struct CayleySummary {
    uint64_t p = 0;
    std::size_t L_max = 0;
    std::size_t words_checked = 0;
    std::size_t witnesses_found = 0;
    std::size_t samples_per_word = 0;
    bool all_matched = true;
};

inline CayleySummary verify_free_product(const PrimeContext& ctx, std::size_t L_max,
                                         std::size_t samples_per_word,
                                         uint64_t seed = 0x9e3779b97f4a7c15ull) {
    CayleySummary s;
    s.p = ctx.p();
    s.L_max = L_max;
    s.samples_per_word = samples_per_word;
    for (std::size_t L = 1; L <= L_max; ++L) {
        for (const Word& w : enumerate_reduced_words(L)) {
            ++s.words_checked;
            if (free_product_witness(w, ctx).has_value()) ++s.witnesses_found;
            if (!word_action_matches(w, ctx, samples_per_word, seed)) s.all_matched = false;
        }
    }
    return s;
}

inline nlohmann::json cayley_summary_json(const CayleySummary& s) {
    return {{"p", s.p},
            {"L_max", s.L_max},
            {"words_checked", s.words_checked},
            {"witnesses_found", s.witnesses_found},
            {"samples_per_word", s.samples_per_word},
            {"all_matched", s.all_matched}};
}

} // namespace markoff
