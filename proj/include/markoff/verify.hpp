#pragma once

#include <chrono>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "markoff/cayley.hpp"
#include "markoff/discrepancy.hpp"
#include "markoff/fixed_points.hpp"
#include "markoff/spectral.hpp"

namespace markoff {

// ---------------------------------------------------------------------------
// Acceptance suite: one entry per criterion, each returning pass/fail with a
// measured detail string.  Quick mode skips the dense eigensolves at
// p >= 53 and reports those criteria as SKIP.
// ---------------------------------------------------------------------------

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string status; // PASS | FAIL | SKIP
    double seconds = 0;
    std::string detail;
};

class AcceptanceSuite {
public:
    explicit AcceptanceSuite(bool quick = false) : quick_(quick) {}

    std::vector<CriterionResult> run() {
        std::vector<CriterionResult> out;
        out.push_back(timed(1, "vertex counts p^2 + 3(-1|p)p for 5 <= p <= 199",
                            [this](std::string& d) { return vertex_counts(d); }));
        out.push_back(timed(2, "generator fixed points p - 4 - (-1|p) for 5 <= p <= 199",
                            [this](std::string& d) { return generator_fixed_points(d); }));
        out.push_back(timed(3, "short-word fixed points exhaustive for p <= 61",
                            [this](std::string& d) { return short_words(d); }));
        out.push_back(timed(4, "word-sum trace equals eigenvalue power sum, L <= 10",
                            [this](std::string& d) { return trace_identity(d); }));
        if (quick_)
            out.push_back(skip(5, "moment bound at p in {53,83,89}, L <= 12"));
        else
            out.push_back(timed(5, "moment bound at p in {53,83,89}, L <= 12",
                                [this](std::string& d) { return moment_bound(d); }));
        out.push_back(timed(6, "single component for every prime p <= 179",
                            [this](std::string& d) { return connectivity(d); }));
        out.push_back(timed(7, "rot conic oracle equals direct scan, n <= 12",
                            [this](std::string& d) { return rot_oracle(d); }));
        out.push_back(timed(8, "matrix machinery: 4^L entries, K <= 8, torsion, L <= 10",
                            [this](std::string& d) { return matrix_machinery(d); }));
        out.push_back(timed(9, "fixed-point bound sweep, L <= 6 at p in {61,97}",
                            [this](std::string& d) { return bound_sweep(d); }));
        out.push_back(timed(10, "kesten-mckay oracle: moments and density",
                            [this](std::string& d) { return km_reference(d); }));
        if (quick_)
            out.push_back(skip(11, "discrepancy sandwich over 20 dyadic intervals"));
        else
            out.push_back(timed(11, "discrepancy sandwich over 20 dyadic intervals",
                                [this](std::string& d) { return discrepancy_sandwich(d); }));
        if (quick_)
            out.push_back(skip(12, "histogram bimodal with modes at +-sqrt(7), p = 83 and 89"));
        else
            out.push_back(timed(12, "histogram bimodal with modes at +-sqrt(7), p = 83 and 89",
                                [this](std::string& d) { return figure_histogram(d); }));
        if (quick_)
            out.push_back(skip(13, "exceptional eigenvalue fraction < 0.2 and decreasing"));
        else
            out.push_back(timed(13, "exceptional eigenvalue fraction < 0.2 and decreasing",
                                [this](std::string& d) { return exceptional_trend(d); }));
        out.push_back(timed(14, "free product witnesses and action match, L <= 10",
                            [this](std::string& d) { return free_product(d); }));
        out.push_back(timed(15, "fricke identity on 10^4 random unimodular pairs",
                            [this](std::string& d) { return fricke_random(d); }));
        return out;
    }

private:
    bool quick_;
    std::map<uint64_t, Spectrum> spectra_;

    const Spectrum& cached_spectrum(uint64_t p) {
        auto it = spectra_.find(p);
        if (it != spectra_.end()) return it->second;
        PrimeContext ctx(p);
        SurfaceIndex idx = enumerate_surface(ctx, 0);
        MarkoffGraph g = build_graph(idx);
        Spectrum s = spectrum(g, p, 11000);
        return spectra_.emplace(p, std::move(s)).first->second;
    }

    template <typename Fn>
    CriterionResult timed(int id, std::string name, Fn&& fn) {
        CriterionResult r;
        r.id = id;
        r.name = std::move(name);
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = fn(r.detail);
        } catch (const std::exception& e) {
            ok = false;
            r.detail = std::string("exception: ") + e.what();
        }
        auto t1 = std::chrono::steady_clock::now();
        r.seconds = std::chrono::duration<double>(t1 - t0).count();
        r.status = ok ? "PASS" : "FAIL";
        return r;
    }

    static CriterionResult skip(int id, std::string name) {
        CriterionResult r;
        r.id = id;
        r.name = std::move(name);
        r.status = "SKIP";
        r.detail = "quick mode skips dense eigensolves at p >= 53";
        return r;
    }

    // -- criterion 1 ---------------------------------------------------------
    bool vertex_counts(std::string& detail) {
        std::size_t checked = 0;
        for (uint64_t p : primes_in(5, 199)) {
            PrimeContext ctx(p);
            long long expect = (long long)(p) * (long long)(p) + 3LL * ctx.legendre_minus_one() * (long long)(p);
            SurfaceIndex idx = enumerate_surface(ctx, 0);
            if ((long long)(idx.size()) != expect) {
                detail = "p=" + std::to_string(p) + " got " + std::to_string(idx.size()) +
                         " expected " + std::to_string(expect);
                return false;
            }
            ++checked;
        }
        detail = std::to_string(checked) + " primes exact";
        return true;
    }

    // -- criterion 2 ---------------------------------------------------------
    bool generator_fixed_points(std::string& detail) {
        std::size_t checked = 0;
        for (uint64_t p : primes_in(5, 199)) {
            PrimeContext ctx(p);
            SurfaceIndex idx = enumerate_surface(ctx, 0);
            std::size_t expect = std::size_t(int64_t(p) - 4 - ctx.legendre_minus_one());
            for (int i = 1; i <= 3; ++i) {
                if (fix_count(word_from({i}), idx) != expect) {
                    detail = "p=" + std::to_string(p) + " generator " + std::to_string(i);
                    return false;
                }
                ++checked;
            }
        }
        detail = std::to_string(checked) + " generator counts exact";
        return true;
    }

    // -- criterion 3 ---------------------------------------------------------
    bool short_words(std::string& detail) {
        std::size_t checked = 0;
        for (uint64_t p : primes_in(5, 61)) {
            PrimeContext ctx(p);
            SurfaceIndex idx = enumerate_surface(ctx, 0);
            std::size_t single = std::size_t(int64_t(p) - 4 - ctx.legendre_minus_one());
            for (const Word& w : enumerate_reduced_words(2)) {
                if (fix_count(w, idx) != 0) {
                    detail = "length-2 word " + w.str() + " has fixed points at p=" + std::to_string(p);
                    return false;
                }
                ++checked;
            }
            for (const Word& w : enumerate_reduced_words(3)) {
                std::size_t expect = w.letters[0] == w.letters[2] ? single : 0;
                if (fix_count(w, idx) != expect) {
                    detail = "length-3 word " + w.str() + " wrong at p=" + std::to_string(p);
                    return false;
                }
                ++checked;
            }
        }
        detail = std::to_string(checked) + " short words exact";
        return true;
    }

    // -- criterion 4 ---------------------------------------------------------
    bool trace_identity(std::string& detail) {
        double worst = 0;
        for (uint64_t p : {5ull, 7ull, 11ull, 13ull, 17ull}) {
            PrimeContext ctx(p);
            SurfaceIndex idx = enumerate_surface(ctx, 0);
            Spectrum s = spectrum(build_graph(idx), p);
            auto sums = word_fix_sums(idx, 10);
            for (std::size_t L = 0; L <= 10; ++L) {
                double eig = 0;
                for (double lam : s.eigenvalues) {
                    double t = 1;
                    for (std::size_t i = 0; i < L; ++i) t *= lam;
                    eig += t;
                }
                double words = double(trace_from_sums(L, sums));
                double err = std::abs(words - eig);
                double tol = 1e-6 * double(idx.size()) * std::pow(3.0, double(L));
                worst = std::max(worst, err / tol);
                if (err > tol) {
                    detail = "p=" + std::to_string(p) + " L=" + std::to_string(L) +
                             " |words-eig|=" + format_double(err, 6);
                    return false;
                }
            }
        }
        detail = "worst err/tol = " + format_double(worst, 3);
        return true;
    }

    // -- criterion 5 ---------------------------------------------------------
    bool moment_bound(std::string& detail) {
        bool ok = true;
        double worst_ratio = 0, worst_small = 0;
        std::string fails;
        for (uint64_t p : {53ull, 83ull, 89ull}) {
            const Spectrum& s = cached_spectrum(p);
            for (unsigned L = 0; L <= 12; ++L) {
                double emp = empirical_moment(s, L);
                double km = double(km_moment(L));
                double err = std::abs(emp - km);
                double bound = std::pow(2.0, 17.0 * L) / double(p);
                worst_ratio = std::max(worst_ratio, err / bound);
                if (err > bound) {
                    ok = false;
                    fails += " bound(p=" + std::to_string(p) + ",L=" + std::to_string(L) + ")";
                }
                if (L <= 6) {
                    worst_small = std::max(worst_small, err);
                    if (err > 1.0) {
                        // sanity ceiling as stated; the exact word-sum counts
                        // force |err| ~ 153/p at L = 5, so this stays red at
                        // these primes
                        ok = false;
                        fails += " ceiling(p=" + std::to_string(p) + ",L=" + std::to_string(L) +
                                 ",err=" + format_double(err, 4) + ")";
                    }
                }
            }
        }
        detail = "worst err/paper-bound = " + format_double(worst_ratio, 3) +
                 ", worst |err| for L<=6 = " + format_double(worst_small, 4);
        if (!fails.empty()) detail += "; failed:" + fails;
        return ok;
    }

    // -- criterion 6 ---------------------------------------------------------
    bool connectivity(std::string& detail) {
        std::size_t checked = 0;
        for (uint64_t p : primes_in(5, 179)) {
            PrimeContext ctx(p);
            SurfaceIndex idx = enumerate_surface(ctx, 0);
            auto sizes = components(build_graph(idx));
            if (sizes.size() != 1) {
                detail = "p=" + std::to_string(p) + " has " + std::to_string(sizes.size()) +
                         " components";
                return false;
            }
            ++checked;
        }
        detail = std::to_string(checked) + " primes connected";
        return true;
    }

    // -- criterion 7 ---------------------------------------------------------
    bool rot_oracle(std::string& detail) {
        std::size_t checked = 0;
        for (uint64_t p : {5ull, 13ull, 17ull, 29ull}) {
            PrimeContext ctx(p);
            SurfaceIndex idx = enumerate_surface(ctx, 0);
            for (uint64_t n = 1; n <= 12; ++n) {
                std::size_t f = rot_fix_count(n, idx); // throws on scan/oracle mismatch
                if (f > 2 * n * p) {
                    detail = "bound 2np violated at p=" + std::to_string(p) + " n=" + std::to_string(n);
                    return false;
                }
                ++checked;
            }
        }
        detail = std::to_string(checked) + " (n, p) pairs, oracle == scan and <= 2np";
        return true;
    }

    // -- criterion 8 ---------------------------------------------------------
    bool matrix_machinery(std::string& detail) {
        std::size_t checked = 0;
        for (std::size_t L = 1; L <= 10; ++L) {
            i128 cap = 1;
            for (std::size_t i = 0; i < L; ++i) cap *= 4;
            for (const Word& w : enumerate_reduced_words(L)) {
                Mat2 m = word_to_matrix(w);
                if (max_entry(m) > cap) {
                    detail = "entry bound 4^L violated by " + w.str();
                    return false;
                }
                PowerClassification pc = classify_power(m);
                if (pc.K < 1 || pc.K > 8) {
                    detail = "K out of range for " + w.str();
                    return false;
                }
                bool sq_trivial = mat_mul(m, m).is_plus_minus_identity();
                if (is_torsion(w) != sq_trivial) {
                    detail = "torsion disagreement for " + w.str();
                    return false;
                }
                ++checked;
            }
        }
        detail = std::to_string(checked) + " words checked";
        return true;
    }

    // -- criterion 9 ---------------------------------------------------------
    bool bound_sweep(std::string& detail) {
        std::size_t theorem = 0, cgmp = 0, torsion = 0, parabolic = 0, words = 0;
        for (uint64_t p : {61ull, 97ull}) {
            PrimeContext ctx(p);
            SurfaceIndex idx = enumerate_surface(ctx, 0);
            for (std::size_t L = 1; L <= 6; ++L) {
                for (const Word& w : enumerate_reduced_words(L)) {
                    FixReport r = verify_bounds(w, idx); // throws BoundViolated on failure
                    ++words;
                    for (const auto& b : r.bounds) {
                        if (!b.applicable) continue;
                        if (b.name == "theorem") ++theorem;
                        else if (b.name == "cgmp") ++cgmp;
                        else if (b.name == "torsion") ++torsion;
                        else if (b.name == "parabolic") ++parabolic;
                    }
                }
            }
        }
        std::ostringstream os;
        os << words << " words, applicable branches: theorem " << theorem << " (hypothesis needs p >= 128), cgmp "
           << cgmp << ", torsion " << torsion << ", parabolic " << parabolic;
        detail = os.str();
        return true;
    }

    // -- criterion 10 --------------------------------------------------------
    bool km_reference(std::string& detail) {
        // independent oracle: enumerate all 3^L letter sequences and count
        // the ones whose stack reduction is empty
        for (unsigned L = 0; L <= 12; ++L) {
            unsigned long long total = 1;
            for (unsigned i = 0; i < L; ++i) total *= 3;
            unsigned long long identity_count = 0;
            std::vector<uint8_t> stack;
            for (unsigned long long code = 0; code < total; ++code) {
                unsigned long long c = code;
                stack.clear();
                for (unsigned i = 0; i < L; ++i) {
                    uint8_t g = uint8_t(1 + c % 3);
                    c /= 3;
                    if (!stack.empty() && stack.back() == g)
                        stack.pop_back();
                    else
                        stack.push_back(g);
                }
                if (stack.empty()) ++identity_count;
            }
            if (km_moment(L) != u128(identity_count)) {
                detail = "km_moment(" + std::to_string(L) + ") != brute force";
                return false;
            }
            if (L % 2 == 1 && km_moment(L) != 0) {
                detail = "odd moment nonzero at L=" + std::to_string(L);
                return false;
            }
        }
        double total_mass = km_interval_mass(-3.0, 3.0);
        if (std::abs(total_mass - 1.0) > 1e-10) {
            detail = "density mass " + format_double(total_mass);
            return false;
        }
        detail = "moments L <= 12 match brute force; density mass 1 within 1e-10";
        return true;
    }

    // -- criterion 11 --------------------------------------------------------
    bool discrepancy_sandwich(std::string& detail) {
        const unsigned m = 12;
        std::vector<double> sups;
        std::ostringstream os;
        bool sandwiches_ok = true;
        for (uint64_t p : {53ull, 83ull, 89ull}) {
            const Spectrum& s = cached_spectrum(p);
            double sup = 0;
            for (auto [lo, hi] : dyadic_intervals(20)) {
                DiscrepancyReport r = interval_discrepancy(s, lo, hi, m);
                if (r.lower > r.mu_p_mass + 1e-9 || r.upper < r.mu_p_mass - 1e-9) {
                    sandwiches_ok = false;
                    os << " miss(p=" << p << ",[" << format_double(lo, 4) << ","
                       << format_double(hi, 4) << "])";
                }
                sup = std::max(sup, r.discrepancy());
            }
            sups.push_back(sup);
            os << " D(" << p << ")=" << format_double(sup, 4);
        }
        bool trend_ok = true;
        for (std::size_t i = 1; i < sups.size(); ++i)
            if (sups[i] > sups[i - 1] + 1e-12) trend_ok = false;
        detail = std::string("sandwiches ") + (sandwiches_ok ? "valid" : "VIOLATED") +
                 " over 60 intervals (m = 12); sup-discrepancy trend " +
                 (trend_ok ? "weakly decreasing" : "NOT weakly decreasing") + ":" + os.str();
        return sandwiches_ok && trend_ok;
    }

    // -- criterion 12 --------------------------------------------------------
    bool figure_histogram(std::string& detail) {
        double root7 = std::sqrt(7.0);
        std::ostringstream os;
        for (uint64_t p : {83ull, 89ull}) {
            const Spectrum& s = cached_spectrum(p);
            auto h = histogram(s, 60);
            double width = 6.0 / 60.0;
            double best_pos = 0, best_neg = 0;
            double mode_pos = 0, mode_neg = 0;
            for (const auto& b : h) {
                if (b.center > 0 && b.frequency > best_pos) {
                    best_pos = b.frequency;
                    mode_pos = b.center;
                }
                if (b.center < 0 && b.frequency > best_neg) {
                    best_neg = b.frequency;
                    mode_neg = b.center;
                }
            }
            if (std::abs(mode_pos - root7) > width + 1e-12 || std::abs(mode_neg + root7) > width + 1e-12) {
                detail = "p=" + std::to_string(p) + " modes at " + format_double(mode_neg, 4) + ", " +
                         format_double(mode_pos, 4) + " not within one bin of +-sqrt(7)";
                return false;
            }
            os << " p=" << p << ": modes " << format_double(mode_neg, 4) << "/"
               << format_double(mode_pos, 4);
        }
        detail = "sqrt(7) = " + format_double(root7, 5) + ";" + os.str();
        return true;
    }

    // -- criterion 13 --------------------------------------------------------
    bool exceptional_trend(std::string& detail) {
        std::vector<double> fracs;
        std::ostringstream os;
        bool ceiling_ok = true;
        for (uint64_t p : {53ull, 83ull, 89ull, 101ull}) {
            const Spectrum& s = cached_spectrum(p);
            double frac = double(exceptional_count(s)) / double(s.size());
            fracs.push_back(frac);
            os << " f(" << p << ")=" << format_double(frac, 4);
            if (frac >= 0.2) ceiling_ok = false;
        }
        bool trend_ok = true;
        for (std::size_t i = 1; i < fracs.size(); ++i)
            if (fracs[i] > fracs[i - 1] + 1e-12) trend_ok = false;
        detail = std::string("ceiling 0.2 ") + (ceiling_ok ? "holds" : "VIOLATED") + "; trend " +
                 (trend_ok ? "weakly decreasing" : "NOT weakly decreasing") + ":" + os.str();
        return ceiling_ok && trend_ok;
    }

    // -- criterion 14 --------------------------------------------------------
    bool free_product(std::string& detail) {
        std::size_t words = 0;
        for (uint64_t p : {7ull, 11ull}) {
            PrimeContext ctx(p);
            for (std::size_t L = 1; L <= 10; ++L) {
                for (const Word& w : enumerate_reduced_words(L)) {
                    ++words;
                    if (!free_product_witness(w, ctx).has_value()) {
                        detail = "no witness for " + w.str() + " at p=" + std::to_string(p);
                        return false;
                    }
                    if (!word_action_matches(w, ctx, 100)) {
                        detail = "action mismatch for " + w.str() + " at p=" + std::to_string(p);
                        return false;
                    }
                }
            }
        }
        detail = std::to_string(words) + " nontrivial words, all witnessed and matched";
        return true;
    }

    // -- criterion 15 --------------------------------------------------------
    bool fricke_random(std::string& detail) {
        std::size_t checked = 0;
        for (uint64_t p : {7ull, 13ull, 101ull}) {
            PrimeContext ctx(p);
            std::mt19937_64 rng(p * 0x9e3779b9ull);
            for (int trial = 0; trial < 10000; ++trial) {
                FpMat2 A, B;
                for (FpMat2* M : {&A, &B}) {
                    for (;;) {
                        uint64_t a = uniform_below(rng, p);
                        uint64_t b = uniform_below(rng, p);
                        uint64_t c = uniform_below(rng, p);
                        if (a == 0) continue;
                        *M = FpMat2{a, b, c, ctx.mul(ctx.add(1, ctx.mul(b, c)), ctx.inv(a))};
                        break;
                    }
                }
                if (!fricke_check(A, B, ctx)) {
                    detail = "identity failed at p=" + std::to_string(p);
                    return false;
                }
                ++checked;
            }
        }
        detail = std::to_string(checked) + " unimodular pairs satisfy the identity";
        return true;
    }
};

inline int print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os) {
    int failures = 0;
    for (const auto& r : results) {
        if (r.status == "FAIL") ++failures;
        char line[160];
        std::snprintf(line, sizeof(line), "%-4s criterion %2d: %s", r.status.c_str(), r.id,
                      r.name.c_str());
        os << line;
        if (r.status != "SKIP") os << " [" << format_double(r.seconds, 3) << "s]";
        os << "\n";
        if (!r.detail.empty()) os << "       " << r.detail << "\n";
    }
    os << (failures == 0 ? "ACCEPTANCE: all run criteria passed\n"
                         : "ACCEPTANCE: " + std::to_string(failures) + " criterion(s) failed\n");
    return failures == 0 ? 0 : 1;
}

} // namespace markoff
