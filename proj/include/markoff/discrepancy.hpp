#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "markoff/spectral.hpp"

namespace markoff {

// ---------------------------------------------------------------------------
// Polygamma machinery for the Beurling function.  Positive arguments only;
// recurrence up to x >= 10, then the asymptotic series.
// ---------------------------------------------------------------------------

namespace detail {

inline double digamma(double x) {
    double acc = 0;
    while (x < 16.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x, inv2 = inv * inv;
    // ln x - 1/(2x) - 1/(12x^2) + 1/(120x^4) - 1/(252x^6) + 1/(240x^8)
    return acc + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
}

inline double trigamma(double x) {
    double acc = 0;
    while (x < 16.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    double inv = 1.0 / x, inv2 = inv * inv;
    // 1/x + 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7) - 1/(30x^9)
    return acc + inv + 0.5 * inv2 +
           inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)));
}

inline double tetragamma(double x) {
    double acc = 0;
    while (x < 16.0) {
        acc -= 2.0 / (x * x * x);
        x += 1.0;
    }
    double inv = 1.0 / x, inv2 = inv * inv;
    // -1/x^2 - 1/x^3 - 1/(2x^4) + 1/(6x^6) - 1/(6x^8) + 3/(10x^10)
    return acc - inv2 - inv * inv2 - 0.5 * inv2 * inv2 +
           inv2 * inv2 * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 6.0 - 0.3 * inv2));
}

inline double sinc_pi_sq(double z) { // (sin(pi z)/pi)^2
    double s = std::sin(M_PI * z) / M_PI;
    return s * s;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Beurling's majorant of sgn:
//   b(z) = (sin(pi z)/pi)^2 (2/z + sum_{n>=0} (z-n)^-2 - sum_{n<=-1} (z-n)^-2).
// Grouping the shifted sums into trigammas gives, away from integers,
//   b(z) =  1 + (sin(pi z)/pi)^2 (2/z - 2 psi1(z+1))   z > 0
//   b(z) = -1 + (sin(pi z)/pi)^2 (2/z + 2 psi1(-z))    z < 0
// with interpolation values b(0) = 1, b(n) = sgn(n) at other integers.
// ---------------------------------------------------------------------------

// excess e(z) = b(z) - sgn(z), with the convention sgn(0) = +1 so e(0) = 0
// (one-sided limit from the right).  Nonnegative, O(1/z^2) decay.
inline double beurling_excess(double z) {
    if (z == 0.0) return 0.0;
    if (z > 0.0)
        return detail::sinc_pi_sq(z) * (2.0 / z - 2.0 * detail::trigamma(z + 1.0));
    return detail::sinc_pi_sq(z) * (2.0 / z + 2.0 * detail::trigamma(-z));
}

inline double beurling_b_exact(double z) {
    if (z == 0.0) return 1.0;
    return (z > 0.0 ? 1.0 : -1.0) + beurling_excess(z);
}

// Truncated-series evaluation as written; tail is below 2/terms in absolute
// value.  Integers take their interpolation values.
inline double beurling_b(double z, std::size_t terms) {
    if (terms < 1000) throw UsageError("beurling_b needs terms >= 1000");
    if (z == std::floor(z) && std::abs(z) < 1e15) {
        if (z == 0.0) return 1.0;
        return z > 0.0 ? 1.0 : -1.0;
    }
    double series = 2.0 / z;
    for (std::size_t n = 0; n < terms; ++n)
        series += 1.0 / ((z - double(n)) * (z - double(n)));
    for (std::size_t k = 1; k <= terms; ++k)
        series -= 1.0 / ((z + double(k)) * (z + double(k)));
    return detail::sinc_pi_sq(z) * series;
}

// ---------------------------------------------------------------------------
// Periodized excess T_m(u) = sum_{n in Z} e(m(u + n)) for integer bandwidth
// m >= 1.  Since m n is an integer, sin^2(pi m(u+n)) is constant across the
// sum, so each side is sin^2 * sum of the smooth part
//   G(z) = 2/z - 2 psi1(z+1)  (z > 0),   H(z) = 2/z + 2 psi1(-z)  (z < 0),
// summed directly over |n| <= N with Euler-Maclaurin tail corrections
// (antiderivative of G is 2 ln z - 2 psi(z+1)).  Residual error is
// O(1/(m^2 N^5)), far below the 1e-9 coefficient target at N = 400.
// ---------------------------------------------------------------------------

namespace detail {

// smooth factor of the excess on each side: e(z) = (sin(pi z)/pi)^2 * (...)
//   right:  G(z)  = 2/z - 2 psi1(z+1),   antiderivative 2 ln z - 2 psi(z+1)
//   left:   H~(w) = -2/w + 2 psi1(w) at w = -z > 0, antiderivative -2 ln w + 2 psi(w)
inline double excess_smooth_pos(double z) { return 2.0 / z - 2.0 * trigamma(z + 1.0); }
inline double excess_smooth_pos_deriv(double z) {
    return -2.0 / (z * z) - 2.0 * tetragamma(z + 1.0);
}
inline double excess_smooth_neg(double w) { return -2.0 / w + 2.0 * trigamma(w); }
inline double excess_smooth_neg_deriv(double w) {
    return 2.0 / (w * w) + 2.0 * tetragamma(w);
}

} // namespace detail

inline double periodized_excess(double u, unsigned m, int N = 400) {
    // nearest-integer reduction keeps offsets a few ulp from a jump intact
    // (flooring into [0,1) would round them into exactly 1.0)
    u -= std::nearbyint(u); // u in [-1/2, 1/2]
    if (u == 0.0) return 0.0;          // every translate sits at an integer, e = 0
    if (std::abs(u) < 1e-100) return u < 0 ? 2.0 : 0.0; // one-sided jump limits
    double dm = double(m);
    double sin2 = detail::sinc_pi_sq(dm * u); // constant across integer-m shifts
    double sum = 0.0;
    for (int n = -N; n <= N; ++n) {
        double z = dm * (u + double(n));
        sum += z > 0.0 ? detail::excess_smooth_pos(z) : detail::excess_smooth_neg(-z);
    }
    // Euler-Maclaurin tails: integral + 1/2 endpoint - derivative/12; the
    // next term is O(1/(m^2 N^5)) and ignored.
    {
        double z0 = dm * (u + double(N + 1));
        sum += (2.0 * detail::digamma(z0 + 1.0) - 2.0 * std::log(z0)) / dm +
               0.5 * detail::excess_smooth_pos(z0) -
               dm / 12.0 * detail::excess_smooth_pos_deriv(z0);
    }
    {
        double w0 = dm * (double(N + 1) - u);
        sum += (2.0 * std::log(w0) - 2.0 * detail::digamma(w0)) / dm +
               0.5 * detail::excess_smooth_neg(w0) -
               dm / 12.0 * detail::excess_smooth_neg_deriv(w0);
    }
    return sin2 * sum;
}

// ---------------------------------------------------------------------------
// Selberg majorant/minorant pairs as Chebyshev polynomials on [-3, 3].
//
// The scaling lambda = K cos(2 pi x) with K = 3 sqrt(2) sends any interval
// J within [-3, 3] to x-values inside [1/8, 3/8], so the symmetrized
// preimage [alpha, beta] u [-beta, -alpha] is disjoint on the circle and
// the periodization sees a single translate.  Fourier coefficients come
// from the composite rule on 2^14 nodes; the sampled function is evaluated
// through the closed form above, a +-1e-8 constant margin certifies the
// majorant/minorant property against all numerical error, and a 10^4-point
// grid check validates the sandwich before the pair is returned.
// ---------------------------------------------------------------------------

inline const double kSelbergK = 3.0 * std::sqrt(2.0);
inline constexpr unsigned kSelbergMaxDegree = 40;
inline constexpr std::size_t kSelbergNodes = 1u << 14;
inline constexpr double kSelbergMargin = 1e-8;

struct SelbergPair {
    double lambda_lo = 0, lambda_hi = 0; // interval J in the spectral variable
    double alpha = 0, beta = 0;          // x-domain interval
    unsigned m = 0;                      // bandwidth / polynomial degree
    std::vector<double> coeffs_plus;     // Chebyshev coefficients of f_m^+ in lambda/K
    std::vector<double> coeffs_minus;

    // Clenshaw evaluation of sum a_nu T_nu(lambda / K)
    static double eval(const std::vector<double>& a, double lambda) {
        double t = lambda / kSelbergK;
        double b1 = 0, b2 = 0;
        for (std::size_t k = a.size(); k-- > 1;) {
            double b0 = 2.0 * t * b1 - b2 + a[k];
            b2 = b1;
            b1 = b0;
        }
        return t * b1 - b2 + a[0];
    }
    double plus(double lambda) const { return eval(coeffs_plus, lambda); }
    double minus(double lambda) const { return eval(coeffs_minus, lambda); }
};

// Monomial coefficients of sum a_nu T_nu(y); exposes the geometric growth
// the Chebyshev basis hides.
inline std::vector<double> chebyshev_to_monomial(const std::vector<double>& a) {
    std::size_t n = a.size();
    std::vector<std::vector<double>> T(n);
    T[0] = {1.0};
    if (n > 1) T[1] = {0.0, 1.0};
    for (std::size_t k = 2; k < n; ++k) {
        T[k].assign(k + 1, 0.0);
        for (std::size_t j = 0; j < T[k - 1].size(); ++j) T[k][j + 1] += 2.0 * T[k - 1][j];
        for (std::size_t j = 0; j < T[k - 2].size(); ++j) T[k][j] -= T[k - 2][j];
    }
    std::vector<double> mono(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < T[k].size(); ++j) mono[j] += a[k] * T[k][j];
    return mono;
}

inline SelbergPair selberg_pair(double lambda_lo, double lambda_hi, unsigned m) {
    if (m < 1 || m > kSelbergMaxDegree) throw UsageError("selberg_pair needs 1 <= m <= 40");
    if (!(lambda_lo <= lambda_hi)) throw UsageError("empty interval");
    lambda_lo = std::max(lambda_lo, -3.0);
    lambda_hi = std::min(lambda_hi, 3.0);

    SelbergPair pair;
    pair.lambda_lo = lambda_lo;
    pair.lambda_hi = lambda_hi;
    pair.m = m;
    // arccos is decreasing: the upper lambda endpoint maps to the lower x
    pair.alpha = std::acos(lambda_hi / kSelbergK) / (2.0 * M_PI);
    pair.beta = std::acos(lambda_lo / kSelbergK) / (2.0 * M_PI);

    const std::size_t M = kSelbergNodes;
    const double alpha = pair.alpha, beta = pair.beta;
    std::vector<double> Fp(M), Fm(M);
    {
        std::vector<double> Pp(M), Pm(M);
        parallel_for(M, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t j = lo; j < hi; ++j) {
                double x = double(j) / double(M);
                bool inside_closed = x >= alpha && x <= beta;
                bool inside_open = x > alpha && x < beta;
                Pp[j] = (inside_closed ? 1.0 : 0.0) +
                        0.5 * periodized_excess(x - alpha, m) +
                        0.5 * periodized_excess(beta - x, m);
                Pm[j] = (inside_open ? 1.0 : 0.0) -
                        0.5 * periodized_excess(alpha - x, m) -
                        0.5 * periodized_excess(x - beta, m);
            }
        });
        for (std::size_t j = 0; j < M; ++j) {
            std::size_t r = (M - j) % M;
            Fp[j] = Pp[j] + Pp[r];
            Fm[j] = Pm[j] + Pm[r];
        }
    }

    // composite-rule Fourier coefficients; F is even so cosine projections
    // carry everything
    auto project = [&](const std::vector<double>& F, unsigned nu) {
        double acc = 0;
        for (std::size_t j = 0; j < M; ++j)
            acc += F[j] * std::cos(2.0 * M_PI * double(nu) * double(j) / double(M));
        return acc / double(M);
    };
    pair.coeffs_plus.resize(m + 1);
    pair.coeffs_minus.resize(m + 1);
    for (unsigned nu = 0; nu <= m; ++nu) {
        double cp = project(Fp, nu), cm = project(Fm, nu);
        pair.coeffs_plus[nu] = nu == 0 ? cp : 2.0 * cp;
        pair.coeffs_minus[nu] = nu == 0 ? cm : 2.0 * cm;
    }

    // band-limitation: spill beyond degree m signals a quadrature problem
    for (unsigned nu = m + 1; nu <= m + 8; ++nu) {
        if (std::abs(project(Fp, nu)) > 1e-9 || std::abs(project(Fm, nu)) > 1e-9)
            throw SandwichFailureError("Fourier mass beyond bandwidth m=" + std::to_string(m));
    }

    // node consistency of the truncated expansion
    for (std::size_t j = 0; j < M; j += 37) {
        double x = double(j) / double(M);
        double lam = kSelbergK * std::cos(2.0 * M_PI * x);
        if (std::abs(pair.plus(lam) - Fp[j]) > 5e-9 || std::abs(pair.minus(lam) - Fm[j]) > 5e-9)
            throw SandwichFailureError("coefficient reconstruction drift");
    }

    pair.coeffs_plus[0] += kSelbergMargin;
    pair.coeffs_minus[0] -= kSelbergMargin;

    // sandwich validation on a 10^4-point lambda grid (closed-interval chi)
    const std::size_t G = 10000;
    for (std::size_t i = 0; i <= G; ++i) {
        double lam = -3.0 + 6.0 * double(i) / double(G);
        double chi = (lam >= lambda_lo && lam <= lambda_hi) ? 1.0 : 0.0;
        if (pair.plus(lam) - chi < -kSelbergMargin || chi - pair.minus(lam) < -kSelbergMargin)
            throw SandwichFailureError("sandwich violated at lambda=" + format_double(lam));
    }
    return pair;
}

// ---------------------------------------------------------------------------
// Interval discrepancy |mu_p(J) - rho_3(J)| with the polynomial sandwich
//   integral(f_m^- dmu_p) <= mu_p(J) <= integral(f_m^+ dmu_p).
// ---------------------------------------------------------------------------

struct DiscrepancyReport {
    uint64_t p = 0;
    double lambda_lo = 0, lambda_hi = 0;
    unsigned m = 0;
    double mu_p_mass = 0; // exact eigenvalue count / |V|
    double km_mass = 0;   // rho_3(J) by quadrature
    double lower = 0;     // integral of f^- against mu_p
    double upper = 0;     // integral of f^+ against mu_p
    double km_lower = 0;  // integral of f^- against rho_3
    double km_upper = 0;  // integral of f^+ against rho_3
    double discrepancy() const { return std::abs(mu_p_mass - km_mass); }
};

inline DiscrepancyReport interval_discrepancy(const Spectrum& s, double lambda_lo,
                                              double lambda_hi, unsigned m) {
    SelbergPair pair = selberg_pair(lambda_lo, lambda_hi, m);
    DiscrepancyReport r;
    r.p = s.p;
    r.lambda_lo = pair.lambda_lo;
    r.lambda_hi = pair.lambda_hi;
    r.m = m;
    std::size_t inside = 0;
    double lo_sum = 0, hi_sum = 0;
    for (double lam : s.eigenvalues) {
        if (lam >= pair.lambda_lo && lam <= pair.lambda_hi) ++inside;
        lo_sum += pair.minus(lam);
        hi_sum += pair.plus(lam);
    }
    double n = double(s.size());
    r.mu_p_mass = double(inside) / n;
    r.lower = lo_sum / n;
    r.upper = hi_sum / n;
    r.km_mass = km_interval_mass(pair.lambda_lo, pair.lambda_hi);

    double edge = 2.0 * std::sqrt(2.0);
    r.km_lower = adaptive_simpson([&](double x) { return pair.minus(x) * km_density(x); },
                                  -edge, edge, 1e-11);
    r.km_upper = adaptive_simpson([&](double x) { return pair.plus(x) * km_density(x); },
                                  -edge, edge, 1e-11);
    return r;
}

// First `count` dyadic subintervals of [-3, 3]: levels of 2, 4, 8, ... equal
// pieces in order.
inline std::vector<std::pair<double, double>> dyadic_intervals(std::size_t count) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t level = 1; out.size() < count && level <= 16; ++level) {
        std::size_t pieces = std::size_t(1) << level;
        double width = 6.0 / double(pieces);
        for (std::size_t i = 0; i < pieces && out.size() < count; ++i)
            out.emplace_back(-3.0 + double(i) * width, -3.0 + double(i + 1) * width);
    }
    return out;
}

inline void write_discrepancy_csv(const std::vector<DiscrepancyReport>& rows, std::ostream& os) {
    os << "p,interval_lo,interval_hi,m,mu_p,km,lower,upper\n";
    for (const auto& r : rows)
        os << r.p << "," << format_double(r.lambda_lo) << "," << format_double(r.lambda_hi) << ","
           << r.m << "," << format_double(r.mu_p_mass) << "," << format_double(r.km_mass) << ","
           << format_double(r.lower) << "," << format_double(r.upper) << "\n";
}

} // namespace markoff
