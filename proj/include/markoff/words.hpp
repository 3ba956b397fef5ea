#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "markoff/common.hpp"

namespace markoff {

// ---------------------------------------------------------------------------
// Reduced words in Z/2 * Z/2 * Z/2 with generators 1, 2, 3.  A word is
// reduced when no two adjacent letters are equal (each generator is an
// involution).  The empty word is the identity.
// ---------------------------------------------------------------------------

struct Word {
    std::vector<uint8_t> letters; // values in {1,2,3}, no adjacent repeats

    bool operator==(const Word&) const = default;
    std::size_t length() const { return letters.size(); }
    bool empty() const { return letters.empty(); }

    std::string str() const {
        std::string s;
        s.reserve(letters.size());
        for (uint8_t g : letters) s.push_back(char('0' + g));
        return s;
    }
};

inline Word word_from(std::initializer_list<int> gens) {
    Word w;
    for (int g : gens) w.letters.push_back(uint8_t(g));
    return w;
}

inline Word parse_word(const std::string& s) {
    Word w;
    for (char c : s) {
        if (c < '1' || c > '3') throw UsageError("word letters must be 1, 2, or 3");
        w.letters.push_back(uint8_t(c - '0'));
    }
    return w;
}

// Cancels adjacent equal pairs until none remain.
inline Word reduce(const std::vector<uint8_t>& seq) {
    Word w;
    for (uint8_t g : seq) {
        if (!w.letters.empty() && w.letters.back() == g)
            w.letters.pop_back();
        else
            w.letters.push_back(g);
    }
    return w;
}

// Strips matching first/last letters (conjugation by an involution).
inline Word cyclic_reduce(Word w) {
    while (w.letters.size() >= 2 && w.letters.front() == w.letters.back()) {
        w.letters.erase(w.letters.begin());
        w.letters.pop_back();
    }
    return w;
}

// Torsion elements are exactly the conjugates of single generators.
inline bool is_torsion(const Word& w) {
    return cyclic_reduce(w).length() == 1;
}

inline Word reverse_word(const Word& w) {
    Word r;
    r.letters.assign(w.letters.rbegin(), w.letters.rend());
    return r;
}

// All reduced words of exactly length L, lexicographic.  Count is 3*2^(L-1)
// for L >= 1 and 1 for L = 0.
inline std::vector<Word> enumerate_reduced_words(std::size_t L) {
    std::vector<Word> out;
    if (L == 0) {
        out.push_back(Word{});
        return out;
    }
    out.reserve(std::size_t(3) << (L - 1));
    Word w;
    w.letters.resize(L);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        for (uint8_t g = 1; g <= 3; ++g) {
            if (pos > 0 && w.letters[pos - 1] == g) continue;
            w.letters[pos] = g;
            if (pos + 1 == L)
                out.push_back(w);
            else
                self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Walks on the 3-regular tree (the Cayley graph of the free product).  The
// number of length-L letter sequences reducing to a target depends only on
// the target's reduced length d, so the frontier DP collapses to distances:
//   g_{t+1}(0) = 3 g_t(1),     g_{t+1}(d) = g_t(d-1) + 2 g_t(d+1)  (d >= 1).
// ---------------------------------------------------------------------------

inline std::vector<u128> tree_walk_row(std::size_t L) {
    std::vector<u128> g(L + 2, 0), next(L + 2, 0);
    g[0] = 1;
    for (std::size_t t = 0; t < L; ++t) {
        next.assign(L + 2, 0);
        next[0] = 3 * g[1];
        for (std::size_t d = 1; d <= L; ++d)
            next[d] = g[d - 1] + 2 * g[d + 1];
        g.swap(next);
    }
    g.resize(L + 1);
    return g;
}

// Number of length-L sequences over {1,2,3} whose reduction equals target.
inline u128 walk_count(std::size_t L, const Word& target) {
    if (target.length() > L) return 0;
    if ((L - target.length()) % 2 != 0) return 0;
    return tree_walk_row(L)[target.length()];
}

// ---------------------------------------------------------------------------
// GL_2(Z) images.  Generator matrices:
//   [m1] = [[1,0],[2,-1]], [m2] = [[-1,2],[0,1]], [m3] = [[-1,0],[0,1]].
// The word g1 g2 ... gL acts on triples with g1 applied first, so its matrix
// is the reversed product [gL] ... [g2] [g1].
// ---------------------------------------------------------------------------

struct Mat2 {
    i128 a = 1, b = 0, c = 0, d = 1; // row-major [[a,b],[c,d]]

    bool operator==(const Mat2&) const = default;

    static Mat2 identity() { return {}; }
    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
    bool is_plus_minus_identity() const {
        return (a == 1 && d == 1 && b == 0 && c == 0) || (a == -1 && d == -1 && b == 0 && c == 0);
    }

    std::string str() const {
        return to_string(a) + "," + to_string(b) + "," + to_string(c) + "," + to_string(d);
    }
};

inline Mat2 mat_mul(const Mat2& x, const Mat2& y) {
    return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
            checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
            checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
            checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
}

inline Mat2 mat_neg(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }

inline i128 mat_det(const Mat2& x) {
    return checked_add(checked_mul(x.a, x.d), -checked_mul(x.b, x.c));
}

inline i128 mat_tr(const Mat2& x) { return checked_add(x.a, x.d); }

inline i128 max_entry(const Mat2& x) {
    i128 m = abs128(x.a);
    if (abs128(x.b) > m) m = abs128(x.b);
    if (abs128(x.c) > m) m = abs128(x.c);
    if (abs128(x.d) > m) m = abs128(x.d);
    return m;
}

inline i128 min_entry(const Mat2& x) {
    i128 m = abs128(x.a);
    if (abs128(x.b) < m) m = abs128(x.b);
    if (abs128(x.c) < m) m = abs128(x.c);
    if (abs128(x.d) < m) m = abs128(x.d);
    return m;
}

inline Mat2 generator_matrix(int i) {
    switch (i) {
        case 1: return {1, 0, 2, -1};
        case 2: return {-1, 2, 0, 1};
        case 3: return {-1, 0, 0, 1};
        default: throw UsageError("generator index must be 1, 2, or 3");
    }
}

inline constexpr std::size_t kMaxWordLengthForMatrix = 60; // 4^60 < 2^126

inline Mat2 word_to_matrix(const Word& w) {
    if (w.length() > kMaxWordLengthForMatrix)
        throw OverflowError("word length exceeds matrix overflow guard");
    Mat2 m = Mat2::identity();
    for (uint8_t g : w.letters)
        m = mat_mul(generator_matrix(g), m); // left-multiply: leftmost letter applied first
    return m;
}

// ---------------------------------------------------------------------------
// Power classification.  For any g in GL_2(Z) there is a power 1 <= K <= 8
// with g^K generic (all entries >= 2 in absolute value), torsion, or a
// standard parabolic +-[[1,n],[0,1]] / +-[[1,0],[n,1]].  K is searched in
// order and, within one K, torsion takes precedence over parabolic over
// generic so results are canonical (torsion and generic can overlap, e.g.
// [[3,2],[-4,-3]]).
// ---------------------------------------------------------------------------

enum class PowerClass { Generic, Torsion, StandardParabolic };

enum class ParabolicSide { Upper, Lower };

struct PowerClassification {
    int K = 1;
    PowerClass cls = PowerClass::Generic;
    // StandardParabolic payload: power equals sign * [[1,n],[0,1]] (Upper)
    // or sign * [[1,0],[n,1]] (Lower)
    i128 n = 0;
    ParabolicSide side = ParabolicSide::Upper;
    int sign = +1;
};

// Finite order in PGL_2(Z): +-I, or det -1 with trace 0 (an involution), or
// det 1 with |trace| < 2 (g^4 = I or g^6 = I by Cayley-Hamilton).
inline bool is_torsion_matrix(const Mat2& m) {
    if (m.is_plus_minus_identity()) return true;
    i128 det = mat_det(m);
    i128 tr = mat_tr(m);
    if (det == -1) return tr == 0;
    if (det == 1) return abs128(tr) < 2;
    return false;
}

inline bool parabolic_form(const Mat2& m, PowerClassification& out) {
    if ((m.a != 1 && m.a != -1) || m.d != m.a) return false;
    if (m.c == 0 && m.b != 0) {
        out.cls = PowerClass::StandardParabolic;
        out.side = ParabolicSide::Upper;
        out.sign = int(m.a);
        out.n = m.a == 1 ? m.b : -m.b;
        return true;
    }
    if (m.b == 0 && m.c != 0) {
        out.cls = PowerClass::StandardParabolic;
        out.side = ParabolicSide::Lower;
        out.sign = int(m.a);
        out.n = m.a == 1 ? m.c : -m.c;
        return true;
    }
    return false;
}

inline PowerClassification classify_power(const Mat2& m) {
    if (m.is_plus_minus_identity())
        throw IdentityInputError("classify_power on +-identity");
    Mat2 h = m;
    for (int K = 1; K <= 8; ++K) {
        if (K > 1) h = mat_mul(h, m);
        PowerClassification res;
        res.K = K;
        if (is_torsion_matrix(h)) {
            res.cls = PowerClass::Torsion;
            return res;
        }
        if (parabolic_form(h, res))
            return res;
        if (min_entry(h) >= 2) {
            res.cls = PowerClass::Generic;
            return res;
        }
    }
    throw Error("classify_power found no class within K <= 8"); // unreachable
}

inline Mat2 mat_pow(const Mat2& m, int K) {
    Mat2 r = Mat2::identity();
    for (int i = 0; i < K; ++i) r = mat_mul(r, m);
    return r;
}

} // namespace markoff
