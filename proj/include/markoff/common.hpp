#pragma once

#include <cstdint>
#include <charconv>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>
#include <functional>
#include <cstdlib>

namespace markoff {

using i128 = __int128;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonResidueError : Error { using Error::Error; };
struct ZeroElementError : Error { using Error::Error; };
struct NotUnimodularError : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };
struct IdentityInputError : Error { using Error::Error; };
struct EmptySurfaceError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };
struct DisagreementError : Error { using Error::Error; };
struct SandwichFailureError : Error { using Error::Error; };
struct BoundViolatedError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Checked wide-integer arithmetic. Matrix entries live in i128; every
// multiply/add is checked so entry blowup surfaces as OverflowError instead
// of wrapping.
// ---------------------------------------------------------------------------

inline i128 checked_add(i128 x, i128 y) {
    i128 r;
    if (__builtin_add_overflow(x, y, &r)) throw OverflowError("i128 add overflow");
    return r;
}

inline i128 checked_mul(i128 x, i128 y) {
    i128 r;
    if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("i128 mul overflow");
    return r;
}

inline i128 abs128(i128 x) { return x < 0 ? -x : x; }

inline std::string to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 u = neg ? u128(-(v + 1)) + 1 : u128(v);
    std::string s;
    while (u > 0) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

// Shortest-exact then fixed-precision formatting, locale independent.
inline std::string format_double(double v, int significant = 17) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Worker pool. Static partition of [0, n) across threads; the default count
// comes from MARKOFF_THREADS or hardware_concurrency.
// ---------------------------------------------------------------------------

inline unsigned default_thread_count() {
    if (const char* env = std::getenv("MARKOFF_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return unsigned(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

inline unsigned& thread_count() {
    static unsigned count = default_thread_count();
    return count;
}

inline void set_thread_count(unsigned n) { thread_count() = n > 0 ? n : 1; }

// fn(begin, end) is called on disjoint chunks, possibly concurrently.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned workers = thread_count();
    if (workers <= 1 || n < 2048) {
        fn(std::size_t(0), n);
        return;
    }
    if (workers > n) workers = unsigned(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Deterministic sampling. std::uniform_int_distribution is implementation
// defined, so CSV-stable runs draw through this instead.
// ---------------------------------------------------------------------------

template <typename Rng>
uint64_t uniform_below(Rng& rng, uint64_t n) {
    // rejection sampling, bias-free
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

} // namespace markoff
