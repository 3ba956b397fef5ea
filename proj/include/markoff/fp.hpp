#pragma once

#include <cstdint>
#include <vector>

#include "markoff/common.hpp"

namespace markoff {

// ---------------------------------------------------------------------------
// Primality and prime ranges (desk scale: trial division backed by a
// deterministic Miller-Rabin witness set for 64-bit inputs).
// ---------------------------------------------------------------------------

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((u128(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

} // namespace detail

inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // deterministic witnesses for n < 3.3e24
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi) {
    std::vector<uint64_t> out;
    for (uint64_t n = lo; n <= hi; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

// ---------------------------------------------------------------------------
// PrimeContext: F_p arithmetic plus the quadratic extension F_p[s]/(s^2 - r)
// with r the least non-residue. Immutable after construction.
// ---------------------------------------------------------------------------

class PrimeContext {
public:
    explicit PrimeContext(uint64_t p) : p_(p) {
        if (!is_prime(p)) throw UsageError("p must be prime, got " + std::to_string(p));
        if (p < 5) throw UsageError("p must be >= 5, got " + std::to_string(p));
        if (p >> 61) throw UsageError("p above 2^61 unsupported");
        legendre_minus_one_ = (p % 4 == 1) ? +1 : -1;
        for (uint64_t r = 2;; ++r) {
            if (legendre(r) == -1) { nonresidue_ = r; break; }
        }
        inv2_ = (p + 1) / 2;
    }

    uint64_t p() const { return p_; }
    int legendre_minus_one() const { return legendre_minus_one_; }
    uint64_t nonresidue() const { return nonresidue_; }

    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
    uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p_ - a; }
    uint64_t mul(uint64_t a, uint64_t b) const { return uint64_t((u128(a) * b) % p_); }
    uint64_t halve(uint64_t a) const { return mul(a, inv2_); }

    uint64_t pow(uint64_t base, uint64_t exp) const {
        uint64_t r = 1;
        base %= p_;
        while (exp > 0) {
            if (exp & 1) r = mul(r, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return r;
    }

    uint64_t inv(uint64_t a) const {
        if (a == 0) throw ZeroElementError("inverse of 0 mod p");
        return pow(a, p_ - 2);
    }

    // Euler criterion; 0 on 0, +1 on nonzero squares, -1 otherwise.
    int legendre(uint64_t a) const {
        a %= p_;
        if (a == 0) return 0;
        uint64_t e = pow(a, (p_ - 1) / 2);
        return e == 1 ? +1 : -1;
    }

    // Square root mod p: shortcut for p = 3 mod 4, Tonelli-Shanks otherwise.
    // Returns the smaller of the two roots as an integer in [0, p).
    uint64_t sqrt_mod(uint64_t a) const {
        a %= p_;
        if (a == 0) return 0;
        int chi = legendre(a);
        if (chi == -1) throw NonResidueError("sqrt_mod of non-residue " + std::to_string(a));
        uint64_t root;
        if (p_ % 4 == 3) {
            root = pow(a, (p_ + 1) / 4);
        } else {
            // Tonelli-Shanks
            uint64_t q = p_ - 1;
            int s = 0;
            while ((q & 1) == 0) { q >>= 1; ++s; }
            uint64_t z = nonresidue_;
            uint64_t m = s;
            uint64_t c = pow(z, q);
            uint64_t t = pow(a, q);
            uint64_t r = pow(a, (q + 1) / 2);
            while (t != 1) {
                uint64_t i = 0, tt = t;
                while (tt != 1) { tt = mul(tt, tt); ++i; }
                uint64_t b = c;
                for (uint64_t j = 0; j + i + 1 < m; ++j) b = mul(b, b);
                m = i;
                c = mul(b, b);
                t = mul(t, c);
                r = mul(r, b);
            }
            root = r;
        }
        uint64_t other = p_ - root;
        return root < other ? root : other;
    }

private:
    uint64_t p_;
    int legendre_minus_one_;
    uint64_t nonresidue_;
    uint64_t inv2_;
};

inline int legendre(uint64_t a, const PrimeContext& ctx) { return ctx.legendre(a); }
inline uint64_t sqrt_mod(uint64_t a, const PrimeContext& ctx) { return ctx.sqrt_mod(a); }

// ---------------------------------------------------------------------------
// F_p^2 = F_p[s]/(s^2 - r).  Elements a + b s.
// ---------------------------------------------------------------------------

struct Fp2Element {
    uint64_t a = 0; // constant part
    uint64_t b = 0; // coefficient of s

    bool operator==(const Fp2Element&) const = default;
    bool is_zero() const { return a == 0 && b == 0; }
};

inline Fp2Element fp2_from(uint64_t a) { return {a, 0}; }

inline Fp2Element fp2_add(const Fp2Element& u, const Fp2Element& v, const PrimeContext& ctx) {
    return {ctx.add(u.a, v.a), ctx.add(u.b, v.b)};
}

inline Fp2Element fp2_sub(const Fp2Element& u, const Fp2Element& v, const PrimeContext& ctx) {
    return {ctx.sub(u.a, v.a), ctx.sub(u.b, v.b)};
}

inline Fp2Element fp2_mul(const Fp2Element& u, const Fp2Element& v, const PrimeContext& ctx) {
    // (a + bs)(c + ds) = ac + r bd + (ad + bc) s
    uint64_t ac = ctx.mul(u.a, v.a);
    uint64_t bd = ctx.mul(u.b, v.b);
    uint64_t ad = ctx.mul(u.a, v.b);
    uint64_t bc = ctx.mul(u.b, v.a);
    return {ctx.add(ac, ctx.mul(ctx.nonresidue(), bd)), ctx.add(ad, bc)};
}

// u * u^p evaluated in F_p: a^2 - r b^2.
inline uint64_t fp2_norm(const Fp2Element& u, const PrimeContext& ctx) {
    return ctx.sub(ctx.mul(u.a, u.a), ctx.mul(ctx.nonresidue(), ctx.mul(u.b, u.b)));
}

inline Fp2Element fp2_conj(const Fp2Element& u, const PrimeContext& ctx) {
    return {u.a, ctx.neg(u.b)};
}

inline Fp2Element fp2_pow(Fp2Element base, uint64_t exp, const PrimeContext& ctx) {
    Fp2Element r = fp2_from(1);
    while (exp > 0) {
        if (exp & 1) r = fp2_mul(r, base, ctx);
        base = fp2_mul(base, base, ctx);
        exp >>= 1;
    }
    return r;
}

inline Fp2Element fp2_inv(const Fp2Element& u, const PrimeContext& ctx) {
    if (u.is_zero()) throw ZeroElementError("inverse of 0 in F_p^2");
    uint64_t n_inv = ctx.inv(fp2_norm(u, ctx));
    Fp2Element c = fp2_conj(u, ctx);
    return {ctx.mul(c.a, n_inv), ctx.mul(c.b, n_inv)};
}

inline std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> fs;
    for (uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            fs.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

// Least positive e with u^e = 1; divides p^2 - 1.
inline uint64_t element_order(const Fp2Element& u, const PrimeContext& ctx) {
    if (u.is_zero()) throw ZeroElementError("order of 0 in F_p^2");
    uint64_t n = ctx.p() * ctx.p() - 1;
    for (uint64_t q : prime_factors(n)) {
        while (n % q == 0 && fp2_pow(u, n / q, ctx) == fp2_from(1))
            n /= q;
    }
    return n;
}

// ---------------------------------------------------------------------------
// 2x2 matrices over F_p and the Fricke trace identity.
// ---------------------------------------------------------------------------

struct FpMat2 {
    uint64_t a = 1, b = 0, c = 0, d = 1; // row-major [[a,b],[c,d]]
    bool operator==(const FpMat2&) const = default;
};

inline FpMat2 fpmat_mul(const FpMat2& x, const FpMat2& y, const PrimeContext& ctx) {
    return {ctx.add(ctx.mul(x.a, y.a), ctx.mul(x.b, y.c)),
            ctx.add(ctx.mul(x.a, y.b), ctx.mul(x.b, y.d)),
            ctx.add(ctx.mul(x.c, y.a), ctx.mul(x.d, y.c)),
            ctx.add(ctx.mul(x.c, y.b), ctx.mul(x.d, y.d))};
}

inline uint64_t fpmat_det(const FpMat2& x, const PrimeContext& ctx) {
    return ctx.sub(ctx.mul(x.a, x.d), ctx.mul(x.b, x.c));
}

inline uint64_t fpmat_tr(const FpMat2& x, const PrimeContext& ctx) {
    return ctx.add(x.a, x.d);
}

inline FpMat2 fpmat_inv_unimodular(const FpMat2& x, const PrimeContext& ctx) {
    return {x.d, ctx.neg(x.b), ctx.neg(x.c), x.a};
}

// tr(A)^2 + tr(B)^2 + tr(AB)^2 = tr(A)tr(B)tr(AB) + tr(ABA^-1B^-1) + 2
// for A, B in SL_2; returns the evaluated identity check.
inline bool fricke_check(const FpMat2& A, const FpMat2& B, const PrimeContext& ctx) {
    if (fpmat_det(A, ctx) != 1) throw NotUnimodularError("A has det != 1");
    if (fpmat_det(B, ctx) != 1) throw NotUnimodularError("B has det != 1");
    FpMat2 AB = fpmat_mul(A, B, ctx);
    FpMat2 comm = fpmat_mul(AB, fpmat_mul(fpmat_inv_unimodular(A, ctx), fpmat_inv_unimodular(B, ctx), ctx), ctx);
    uint64_t x = fpmat_tr(A, ctx), y = fpmat_tr(B, ctx), z = fpmat_tr(AB, ctx);
    uint64_t lhs = ctx.add(ctx.add(ctx.mul(x, x), ctx.mul(y, y)), ctx.mul(z, z));
    uint64_t rhs = ctx.add(ctx.add(ctx.mul(ctx.mul(x, y), z), fpmat_tr(comm, ctx)), 2 % ctx.p());
    return lhs == rhs;
}

} // namespace markoff
