#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "markoff/graph.hpp"
#include "markoff/surface.hpp"

using namespace markoff;

static std::vector<MarkoffTriple> brute_force_surface(const PrimeContext& ctx, uint64_t k) {
    std::vector<MarkoffTriple> out;
    uint64_t p = ctx.p();
    for (uint64_t x = 0; x < p; ++x)
        for (uint64_t y = 0; y < p; ++y)
            for (uint64_t z = 0; z < p; ++z) {
                MarkoffTriple t{x, y, z};
                if (level_value(t, ctx) == k % p) {
                    if (k % p == 0 && x == 0 && y == 0 && z == 0) continue;
                    out.push_back(t);
                }
            }
    return out;
}

TEST_CASE("vertex counts p=5 and p=7") {
    PrimeContext p5(5), p7(7);
    CHECK(enumerate_surface(p5, 0).size() == 40);
    CHECK(enumerate_surface(p7, 0).size() == 28);
}

TEST_CASE("enumeration equals exhaustive triple scan") {
    for (uint64_t p : {5ull, 7ull, 11ull}) {
        PrimeContext ctx(p);
        for (uint64_t k : {0ull, 4ull}) {
            SurfaceIndex idx = enumerate_surface(ctx, k);
            auto brute = brute_force_surface(ctx, k);
            std::sort(brute.begin(), brute.end());
            REQUIRE(idx.vertices() == brute);
        }
    }
}

TEST_CASE("vertex count formula p^2 + 3(-1|p)p") {
    for (uint64_t p : {5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull, 41ull, 43ull}) {
        PrimeContext ctx(p);
        long long expect = (long long)(p) * (long long)(p) + 3LL * ctx.legendre_minus_one() * (long long)(p);
        CHECK((long long)(enumerate_surface(ctx, 0).size()) == expect);
    }
}

TEST_CASE("apply_move formula and involution") {
    PrimeContext p7(7);
    CHECK(apply_move(1, MarkoffTriple{1, 2, 3}, p7) == MarkoffTriple{5, 2, 3});

    for (uint64_t p : {5ull, 13ull, 61ull}) {
        PrimeContext ctx(p);
        SurfaceIndex idx = enumerate_surface(ctx, 0);
        for (const auto& t : idx.vertices())
            for (int i = 1; i <= 3; ++i)
                REQUIRE(apply_move(i, apply_move(i, t, ctx), ctx) == t);
    }
}

TEST_CASE("moves preserve every level value") {
    PrimeContext ctx(101);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        MarkoffTriple t{uniform_below(rng, 101), uniform_below(rng, 101), uniform_below(rng, 101)};
        uint64_t k = level_value(t, ctx);
        for (int i = 1; i <= 3; ++i)
            REQUIRE(level_value(apply_move(i, t, ctx), ctx) == k);
    }
}

TEST_CASE("no bigons: distinct moves give distinct images") {
    for (uint64_t p : {5ull, 7ull, 13ull, 29ull, 61ull}) {
        PrimeContext ctx(p);
        SurfaceIndex idx = enumerate_surface(ctx, 0);
        for (const auto& t : idx.vertices())
            for (int i = 1; i <= 3; ++i)
                for (int j = i + 1; j <= 3; ++j)
                    REQUIRE_FALSE(apply_move(i, t, ctx) == apply_move(j, t, ctx));
    }
}

TEST_CASE("graph structure: 3 endpoints per row, symmetric, loop census") {
    for (uint64_t p : {5ull, 7ull, 13ull, 17ull}) {
        PrimeContext ctx(p);
        SurfaceIndex idx = enumerate_surface(ctx, 0);
        MarkoffGraph g = build_graph(idx);
        REQUIRE(g.endpoint_count() == 3 * g.vertex_count());

        long long loops_expected = 3 * ((long long)(p)-4 - ctx.legendre_minus_one());
        CHECK((long long)(g.loop_count()) == loops_expected);

        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
            auto [first, last] = g.neighbors(v);
            REQUIRE(last - first == 3);
            for (const uint32_t* it = first; it != last; ++it) {
                auto [nf, nl] = g.neighbors(*it);
                bool back = false;
                for (const uint32_t* jt = nf; jt != nl; ++jt)
                    if (*jt == v) back = true;
                REQUIRE(back);
            }
        }
    }
}

TEST_CASE("adjacency equals brute-force pairwise move checks at p=5") {
    PrimeContext ctx(5);
    SurfaceIndex idx = enumerate_surface(ctx, 0);
    MarkoffGraph g = build_graph(idx);
    std::set<std::pair<std::size_t, std::size_t>> brute;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b)
            for (int i = 1; i <= 3; ++i)
                if (apply_move(i, idx.vertex(a), ctx) == idx.vertex(b))
                    brute.insert({a, b});
    std::set<std::pair<std::size_t, std::size_t>> fast;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        auto [first, last] = g.neighbors(v);
        for (const uint32_t* it = first; it != last; ++it)
            fast.insert({v, *it});
    }
    CHECK(fast == brute);
}

TEST_CASE("components") {
    PrimeContext ctx(5);
    MarkoffGraph g = build_graph(enumerate_surface(ctx, 0));
    auto sizes = components(g);
    REQUIRE(sizes.size() == 1);
    CHECK(sizes[0] == 40);

    MarkoffGraph empty({0}, {}, {});
    CHECK(components(empty).empty());

    CHECK_THROWS_AS(build_graph(SurfaceIndex(ctx, 1, {})), EmptySurfaceError);
}

TEST_CASE("graph stats") {
    PrimeContext p13(13), p7(7), p5(5);
    {
        SurfaceIndex idx = enumerate_surface(p13, 0);
        GraphStats s = graph_stats(idx, build_graph(idx));
        CHECK(s.triangle_exists);
        CHECK(s.vertex_count == 13 * 13 + 3 * 13);
    }
    {
        SurfaceIndex idx = enumerate_surface(p7, 0);
        GraphStats s = graph_stats(idx, build_graph(idx));
        CHECK(s.loop_count == 12);
    }
    {
        SurfaceIndex idx = enumerate_surface(p5, 0);
        GraphStats s = graph_stats(idx, build_graph(idx));
        CHECK(s.loop_count == 0);
        CHECK_FALSE(s.triangle_exists); // p - 4 - (-1|5) = 0 fixed points per move
    }
}

TEST_CASE("csv exports are deterministic") {
    PrimeContext ctx(5);
    SurfaceIndex idx = enumerate_surface(ctx, 0);
    std::ostringstream a, b;
    write_surface_csv(idx, a);
    write_surface_csv(idx, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().substr(0, 6) == "x,y,z\n");

    std::ostringstream e;
    write_edges_csv(build_graph(idx), e);
    CHECK(e.str().substr(0, 14) == "src_id,dst_id\n");
}
