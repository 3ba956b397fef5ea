#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "markoff/spectral.hpp"

using namespace markoff;

namespace {

MarkoffGraph graph_from_rows(const std::vector<std::vector<uint32_t>>& rows) {
    std::vector<uint32_t> offsets{0}, neighbors;
    std::vector<bool> loops(rows.size(), false);
    for (std::size_t v = 0; v < rows.size(); ++v) {
        for (uint32_t u : rows[v]) {
            neighbors.push_back(u);
            if (u == v) loops[v] = true;
        }
        offsets.push_back(uint32_t(neighbors.size()));
    }
    return MarkoffGraph(std::move(offsets), std::move(neighbors), std::move(loops));
}

} // namespace

TEST_CASE("eigensolver against closed-form spectra") {
    // path P_n: 2 cos(k pi / (n+1))
    const std::size_t n = 12;
    std::vector<std::vector<uint32_t>> rows(n);
    for (std::size_t v = 0; v + 1 < n; ++v) {
        rows[v].push_back(uint32_t(v + 1));
        rows[v + 1].push_back(uint32_t(v));
    }
    Spectrum path = spectrum(graph_from_rows(rows), 0);
    std::vector<double> expect;
    for (std::size_t k = 1; k <= n; ++k)
        expect.push_back(2.0 * std::cos(double(k) * M_PI / double(n + 1)));
    std::sort(expect.begin(), expect.end());
    for (std::size_t i = 0; i < n; ++i)
        REQUIRE(path.eigenvalues[i] == doctest::Approx(expect[i]).epsilon(1e-12));

    // cycle C_n: 2 cos(2 pi k / n)
    std::vector<std::vector<uint32_t>> crows(n);
    for (std::size_t v = 0; v < n; ++v) {
        crows[v].push_back(uint32_t((v + 1) % n));
        crows[v].push_back(uint32_t((v + n - 1) % n));
    }
    Spectrum cyc = spectrum(graph_from_rows(crows), 0);
    std::vector<double> cexpect;
    for (std::size_t k = 0; k < n; ++k)
        cexpect.push_back(2.0 * std::cos(2.0 * M_PI * double(k) / double(n)));
    std::sort(cexpect.begin(), cexpect.end());
    for (std::size_t i = 0; i < n; ++i)
        REQUIRE(cyc.eigenvalues[i] == doctest::Approx(cexpect[i]).epsilon(1e-10));

    // complete K_n: n-1 once, -1 with multiplicity n-1
    std::vector<std::vector<uint32_t>> krows(n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u = 0; u < n; ++u)
            if (u != v) krows[v].push_back(uint32_t(u));
    Spectrum comp = spectrum(graph_from_rows(krows), 0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        REQUIRE(comp.eigenvalues[i] == doctest::Approx(-1.0).epsilon(1e-12));
    REQUIRE(comp.eigenvalues[n - 1] == doctest::Approx(double(n - 1)).epsilon(1e-12));
}

TEST_CASE("markoff spectrum invariants at p = 7") {
    PrimeContext ctx(7);
    SurfaceIndex idx = enumerate_surface(ctx, 0);
    MarkoffGraph g = build_graph(idx);
    Spectrum s = spectrum(g, 7);
    REQUIRE(s.size() == 28);

    for (double lam : s.eigenvalues) {
        CHECK(lam <= 3.0 + 1e-9);
        CHECK(lam >= -3.0 - 1e-9);
    }

    ThreeMultiplicity m3 = multiplicity_of_three(s);
    CHECK(m3.count == 1);
    CHECK(m3.gap_ok);

    double sum = 0, sum2 = 0;
    for (double lam : s.eigenvalues) {
        sum += lam;
        sum2 += lam * lam;
    }
    CHECK(sum == doctest::Approx(double(g.loop_count())).epsilon(1e-9)); // tr A = 12
    CHECK(sum2 == doctest::Approx(3.0 * 28).epsilon(1e-9));              // tr A^2 = 3|V|

    CHECK(empirical_moment(s, 0) == doctest::Approx(1.0));
    CHECK(empirical_moment(s, 1) == doctest::Approx(12.0 / 28.0).epsilon(1e-9));
    CHECK(empirical_moment(s, 2) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("residual spot check with eigenvectors at p = 13") {
    PrimeContext ctx(13);
    SurfaceIndex idx = enumerate_surface(ctx, 0);
    MarkoffGraph g = build_graph(idx);
    auto [s, vecs] = spectrum_with_vectors(g, 13);
    std::size_t n = s.size();
    for (std::size_t j : {std::size_t(0), n / 2, n - 1}) {
        const double* v = vecs.data() + j * n;
        double resid = 0;
        for (std::size_t row = 0; row < n; ++row) {
            double av = 0;
            auto [first, last] = g.neighbors(row);
            for (const uint32_t* it = first; it != last; ++it) av += v[*it];
            double r = av - s.eigenvalues[j] * v[row];
            resid += r * r;
        }
        REQUIRE(std::sqrt(resid) <= 1e-9 * 3.0);
    }
}

TEST_CASE("trace via words: examples and eigenvalue cross-check") {
    PrimeContext p7(7);
    SurfaceIndex i7 = enumerate_surface(p7, 0);
    CHECK(trace_via_words(i7, 0) == i128(28));
    CHECK(trace_via_words(i7, 2) == i128(84));
    CHECK(trace_via_words(i7, 3) == i128(84)); // 21 * (p - 4 - (-1|p)) = 21 * 4

    for (uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
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
            double tol = 1e-6 * double(idx.size()) * std::pow(3.0, double(L));
            REQUIRE(std::abs(words - eig) <= tol);
        }
    }
}

TEST_CASE("kesten-mckay moments") {
    CHECK(km_moment(0) == 1);
    CHECK(km_moment(1) == 0);
    CHECK(km_moment(2) == 3);
    CHECK(km_moment(4) == 15);
    for (unsigned L = 0; L <= 12; ++L) {
        CHECK(km_moment(L) == walk_count(L, Word{}));
        if (L % 2 == 1) CHECK(km_moment(L) == 0);
    }
    // d = 4 sanity: the L = 2 closed walks are one step out, one step back
    KestenMcKayModel d4{4};
    CHECK(km_moment(2, d4) == 4);
}

TEST_CASE("kesten-mckay density and interval masses") {
    double edge = 2.0 * std::sqrt(2.0);
    CHECK(km_density(3.0) == 0.0);
    CHECK(km_density(-2.9) == 0.0);
    for (double lam = 0; lam <= 2.8; lam += 0.07)
        CHECK(km_density(lam) == doctest::Approx(km_density(-lam)).epsilon(1e-15));

    CHECK(std::abs(km_interval_mass(-edge, edge) - 1.0) <= 1e-10);
    CHECK(std::abs(km_interval_mass(-3.0, 3.0) - 1.0) <= 1e-10);
    CHECK(std::abs(km_interval_mass(-edge, 0.0) - 0.5) <= 1e-10);
    CHECK(km_interval_mass(1.0, 0.5) == 0.0);

    // second moment through the quadrature route
    auto f = [&](double x) { return x * x * km_density(x); };
    double m2 = adaptive_simpson(f, -edge, edge, 1e-11);
    CHECK(m2 == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("histogram and exceptional census") {
    PrimeContext ctx(13);
    SurfaceIndex idx = enumerate_surface(ctx, 0);
    Spectrum s = spectrum(build_graph(idx), 13);

    auto one = histogram(s, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].frequency == doctest::Approx(1.0).epsilon(1e-12));

    auto h = histogram(s, 60);
    double total = 0;
    for (const auto& b : h) total += b.frequency;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    std::size_t exc = exceptional_count(s);
    std::size_t manual = 0;
    for (double lam : s.eigenvalues)
        if (lam > 2.0 * std::sqrt(2.0)) ++manual;
    CHECK(exc == manual);
    CHECK(exc >= 1); // lambda = 3 itself
}

TEST_CASE("multiplicity of 3 equals the component count") {
    for (uint64_t p : {5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull}) {
        PrimeContext ctx(p);
        SurfaceIndex idx = enumerate_surface(ctx, 0);
        MarkoffGraph g = build_graph(idx);
        ThreeMultiplicity m3 = multiplicity_of_three(spectrum(g, p));
        REQUIRE(m3.gap_ok);
        REQUIRE(m3.count == components(g).size());
    }
}

TEST_CASE("dense cap") {
    PrimeContext ctx(13);
    MarkoffGraph g = build_graph(enumerate_surface(ctx, 0));
    CHECK_THROWS_AS(spectrum(g, 13, 10), TooLargeError);
}

TEST_CASE("csv formats") {
    PrimeContext ctx(5);
    Spectrum s = spectrum(build_graph(enumerate_surface(ctx, 0)), 5);
    std::ostringstream os;
    write_spectrum_csv(s, os);
    const std::string spec_csv = os.str();
    CHECK(std::count(spec_csv.begin(), spec_csv.end(), '\n') == 40);

    std::ostringstream hs;
    write_histogram_csv(histogram(s, 10), hs);
    CHECK(hs.str().substr(0, 21) == "bin_center,frequency\n");

    std::vector<MomentRow> rows;
    for (unsigned L = 0; L <= 4; ++L) rows.push_back(moment_row(s, L));
    std::ostringstream ms;
    write_moments_csv(rows, ms);
    CHECK(ms.str().rfind("L,empirical,km,abs_error,paper_bound\n", 0) == 0);
}
