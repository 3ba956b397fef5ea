#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include <lapacke.h>

#include "markoff/fixed_points.hpp"
#include "markoff/graph.hpp"

namespace markoff {

// ---------------------------------------------------------------------------
// Adjacency spectrum.  The matrix is 0/1 symmetric with loops contributing 1
// on the diagonal; eigenvalues come out of LAPACK's symmetric solver sorted
// ascending and live in [-3, 3].
// ---------------------------------------------------------------------------

struct Spectrum {
    uint64_t p = 0;
    std::vector<double> eigenvalues; // ascending

    std::size_t size() const { return eigenvalues.size(); }
};

inline constexpr std::size_t kDefaultDenseCap = 10000;

namespace detail {

inline std::vector<double> dense_adjacency(const MarkoffGraph& g) {
    std::size_t n = g.vertex_count();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        auto [first, last] = g.neighbors(v);
        for (const uint32_t* it = first; it != last; ++it)
            a[v * n + *it] = 1.0;
    }
    return a;
}

// Eigenvalues of a 3-regular graph live in [-3, 3]; solver noise a few ulp
// past the ends is clamped, anything worse is an error.
inline void clamp_spectrum(std::vector<double>& w) {
    for (double& lam : w) {
        if (lam > 3.0) {
            if (lam > 3.0 + 1e-9) throw Error("eigenvalue above 3: " + format_double(lam));
            lam = 3.0;
        } else if (lam < -3.0) {
            if (lam < -3.0 - 1e-9) throw Error("eigenvalue below -3: " + format_double(lam));
            lam = -3.0;
        }
    }
}

} // namespace detail

// Eigenvalues only.  A symmetric matrix reads the same in row and column
// major, so the buffer goes to LAPACK column-major with no transposed copy.
inline Spectrum spectrum(const MarkoffGraph& g, uint64_t p, std::size_t dense_cap = kDefaultDenseCap) {
    std::size_t n = g.vertex_count();
    if (n > dense_cap)
        throw TooLargeError("dense eigensolve cap " + std::to_string(dense_cap) +
                            " exceeded by |V| = " + std::to_string(n));
    Spectrum s;
    s.p = p;
    s.eigenvalues.resize(n);
    {
        std::vector<double> a = detail::dense_adjacency(g);
        lapack_int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'U', lapack_int(n), a.data(),
                                        lapack_int(n), s.eigenvalues.data());
        if (info != 0) throw Error("dsyev failed with info=" + std::to_string(info));
    }
    if (g.endpoint_count() == 3 * n) detail::clamp_spectrum(s.eigenvalues);
    return s;
}

// Eigenvalues and eigenvectors (column j of the returned matrix pairs with
// eigenvalue j); used for residual spot checks at small p.
inline std::pair<Spectrum, std::vector<double>> spectrum_with_vectors(const MarkoffGraph& g, uint64_t p) {
    std::size_t n = g.vertex_count();
    if (n > 2000) throw TooLargeError("vector path reserved for small graphs");
    Spectrum s;
    s.p = p;
    s.eigenvalues.resize(n);
    std::vector<double> a = detail::dense_adjacency(g);
    lapack_int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'U', lapack_int(n), a.data(),
                                    lapack_int(n), s.eigenvalues.data());
    if (info != 0) throw Error("dsyev failed with info=" + std::to_string(info));
    if (g.endpoint_count() == 3 * n) detail::clamp_spectrum(s.eigenvalues);
    return {std::move(s), std::move(a)};
}

inline double empirical_moment(const Spectrum& s, unsigned L) {
    double sum = 0;
    for (double lam : s.eigenvalues) {
        double t = 1;
        for (unsigned i = 0; i < L; ++i) t *= lam;
        sum += t;
    }
    return sum / double(s.size());
}

struct ThreeMultiplicity {
    std::size_t count = 0; // eigenvalues with |lambda - 3| < tol
    double gap = 0;        // 3 minus the largest eigenvalue outside the cluster
    bool gap_ok = false;   // gap exceeds 1e-3, so the count is trustworthy
};

inline ThreeMultiplicity multiplicity_of_three(const Spectrum& s, double tol = 1e-6) {
    ThreeMultiplicity m;
    double next = -3.0;
    for (double lam : s.eigenvalues) {
        if (std::abs(lam - 3.0) < tol)
            ++m.count;
        else if (lam > next)
            next = lam;
    }
    m.gap = 3.0 - next;
    m.gap_ok = m.gap > 1e-3;
    return m;
}

// ---------------------------------------------------------------------------
// tr(A^L) as an exact integer through the word expansion
//    tr(A^L) = sum over reduced words w of walk_count(L, w) * Fix(w),
// fully independent of the eigensolver.  The walk count depends only on the
// reduced length d, so per-length fixed-point sums are enough.
// ---------------------------------------------------------------------------

// S[d] = sum of Fix(w) over reduced words of length exactly d; S[0] = |V|.
inline std::vector<i128> word_fix_sums(const SurfaceIndex& idx, std::size_t max_len) {
    std::vector<i128> S(max_len + 1, 0);
    S[0] = i128(idx.size());
    for (std::size_t d = 1; d <= max_len; ++d)
        for (const Word& w : enumerate_reduced_words(d))
            S[d] += i128(fix_count(w, idx));
    return S;
}

inline i128 trace_from_sums(std::size_t L, const std::vector<i128>& sums) {
    if (sums.size() <= L) throw UsageError("fixed-point sums shorter than L");
    auto row = tree_walk_row(L);
    i128 total = 0;
    for (std::size_t d = L % 2; d <= L; d += 2)
        total = checked_add(total, checked_mul(i128(row[d]), sums[d]));
    return total;
}

inline constexpr std::size_t kTraceWordCap = 24; // 3 * 2^23 words of top length

inline i128 trace_via_words(const SurfaceIndex& idx, std::size_t L) {
    if (L > kTraceWordCap) throw UsageError("trace_via_words word-enumeration cap exceeded");
    return trace_from_sums(L, word_fix_sums(idx, L));
}

// ---------------------------------------------------------------------------
// Kesten-McKay reference model for a d-regular graph.
// ---------------------------------------------------------------------------

struct KestenMcKayModel {
    unsigned d = 3;
    double support() const { return 2.0 * std::sqrt(double(d - 1)); }
};

inline double km_density(double lambda, const KestenMcKayModel& model = {}) {
    double d = double(model.d);
    double edge = model.support();
    if (lambda <= -edge || lambda >= edge) return 0.0;
    return (d / (2.0 * M_PI)) * std::sqrt(4.0 * (d - 1.0) - lambda * lambda) / (d * d - lambda * lambda);
}

// Exact moment: closed walks of length L from the root of the d-regular tree
// (the root has d children, every other vertex d - 1).
inline u128 km_moment(unsigned L, const KestenMcKayModel& model = {}) {
    unsigned d = model.d;
    std::vector<u128> g(L + 2, 0), next(L + 2, 0);
    g[0] = 1;
    for (unsigned t = 0; t < L; ++t) {
        next.assign(L + 2, 0);
        next[0] = u128(d) * g[1];
        for (std::size_t k = 1; k <= L; ++k)
            next[k] = g[k - 1] + u128(d - 1) * g[k + 1];
        g.swap(next);
    }
    return g[0];
}

// Recursive adaptive Simpson with absolute-error control.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
    auto simpson = [&f](double x0, double x2) {
        double x1 = 0.5 * (x0 + x2);
        return (x2 - x0) / 6.0 * (f(x0) + 4.0 * f(x1) + f(x2));
    };
    std::function<double(double, double, double, double, int)> rec =
        [&](double x0, double x2, double whole, double eps, int d) -> double {
        double x1 = 0.5 * (x0 + x2);
        double left = simpson(x0, x1), right = simpson(x1, x2);
        double delta = left + right - whole;
        if (d <= 0 || std::abs(delta) <= 15.0 * eps)
            return left + right + delta / 15.0;
        return rec(x0, x1, left, eps / 2.0, d - 1) + rec(x1, x2, right, eps / 2.0, d - 1);
    };
    double whole = simpson(a, b);
    return rec(a, b, whole, tol, depth);
}

// Mass of the interval under the KM density, absolute error <= 1e-10.  The
// square-root edge vanishes under lambda = R sin(theta), leaving a smooth
// integrand.
inline double km_interval_mass(double lo, double hi, const KestenMcKayModel& model = {}) {
    double R = model.support();
    double d = double(model.d);
    double a = std::max(lo, -R), b = std::min(hi, R);
    if (a >= b) return 0.0;
    double ta = std::asin(std::clamp(a / R, -1.0, 1.0));
    double tb = std::asin(std::clamp(b / R, -1.0, 1.0));
    auto f = [&](double th) {
        double c = std::cos(th), s = std::sin(th);
        return (d / (2.0 * M_PI)) * R * R * c * c / (d * d - R * R * s * s);
    };
    return adaptive_simpson(f, ta, tb, 1e-12);
}

// ---------------------------------------------------------------------------
// Histograms and the exceptional-eigenvalue census.
// ---------------------------------------------------------------------------

struct HistogramBin {
    double center = 0;
    double frequency = 0;
};

// Equal-width bins over [-3, 3]; frequencies sum to 1.
inline std::vector<HistogramBin> histogram(const Spectrum& s, std::size_t bins) {
    if (bins == 0) throw UsageError("histogram needs at least one bin");
    std::vector<HistogramBin> out(bins);
    double width = 6.0 / double(bins);
    for (std::size_t b = 0; b < bins; ++b)
        out[b].center = -3.0 + (double(b) + 0.5) * width;
    double unit = 1.0 / double(s.size());
    for (double lam : s.eigenvalues) {
        auto b = std::size_t(std::clamp((lam + 3.0) / width, 0.0, double(bins) - 1.0));
        out[b].frequency += unit;
    }
    return out;
}

// #{lambda_j > 2 sqrt(2)}
inline std::size_t exceptional_count(const Spectrum& s) {
    double edge = 2.0 * std::sqrt(2.0);
    std::size_t n = 0;
    for (double lam : s.eigenvalues)
        if (lam > edge) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// CSV artifacts (17 significant digits, locale independent).
// ---------------------------------------------------------------------------

inline void write_spectrum_csv(const Spectrum& s, std::ostream& os) {
    for (double lam : s.eigenvalues)
        os << format_double(lam) << "\n";
}

inline void write_histogram_csv(const std::vector<HistogramBin>& h, std::ostream& os) {
    os << "bin_center,frequency\n";
    for (const auto& bin : h)
        os << format_double(bin.center) << "," << format_double(bin.frequency) << "\n";
}

struct MomentRow {
    unsigned L = 0;
    double empirical = 0;
    double km = 0;
    double abs_error = 0;
    double paper_bound = 0; // 2^(17 L) / p
};

inline MomentRow moment_row(const Spectrum& s, unsigned L) {
    MomentRow r;
    r.L = L;
    r.empirical = empirical_moment(s, L);
    r.km = double(km_moment(L));
    r.abs_error = std::abs(r.empirical - r.km);
    r.paper_bound = std::pow(2.0, 17.0 * L) / double(s.p);
    return r;
}

inline void write_moments_csv(const std::vector<MomentRow>& rows, std::ostream& os) {
    os << "L,empirical,km,abs_error,paper_bound\n";
    for (const auto& r : rows)
        os << r.L << "," << format_double(r.empirical) << "," << format_double(r.km) << ","
           << format_double(r.abs_error) << "," << format_double(r.paper_bound) << "\n";
}

} // namespace markoff
