#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "markoff/cayley.hpp"

using namespace markoff;

TEST_CASE("derived triples lie on the cayley cubic") {
    for (uint64_t p : {7ull, 11ull, 13ull}) {
        PrimeContext ctx(p);
        std::mt19937_64 rng(p);
        for (int trial = 0; trial < 200; ++trial) {
            CayleyPoint pt;
            if (trial % 2 == 0) {
                pt.xi = random_fp_star(rng, ctx);
                pt.eta = random_fp_star(rng, ctx);
            } else {
                pt.xi = random_norm_one(rng, ctx);
                pt.eta = random_norm_one(rng, ctx);
            }
            CayleyTriple t = derived_triple(pt, ctx);
            REQUIRE(cayley_level(t, ctx) == fp2_from(4 % p));
            // pool-homogeneous points have rational triples
            REQUIRE(t.x.b == 0);
            REQUIRE(t.y.b == 0);
            REQUIRE(t.z.b == 0);
        }
    }
}

TEST_CASE("norm-one sampling hits the torus") {
    PrimeContext ctx(11);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        Fp2Element v = random_norm_one(rng, ctx);
        CHECK(fp2_norm(v, ctx) == 1);
        CHECK(fp2_pow(v, ctx.p() + 1, ctx) == fp2_from(1));
    }
}

TEST_CASE("moves preserve every level over fp2") {
    PrimeContext ctx(31);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        CayleyTriple t{{uniform_below(rng, 31), uniform_below(rng, 31)},
                       {uniform_below(rng, 31), uniform_below(rng, 31)},
                       {uniform_below(rng, 31), uniform_below(rng, 31)}};
        Fp2Element k = cayley_level(t, ctx);
        for (int i = 1; i <= 3; ++i)
            REQUIRE(cayley_level(apply_move_fp2(i, t, ctx), ctx) == k);
    }
}

TEST_CASE("level sets are preserved on the enumerated k = 4 surface") {
    for (uint64_t p : {7ull, 13ull, 31ull}) {
        PrimeContext ctx(p);
        SurfaceIndex idx = enumerate_surface(ctx, 4);
        for (const auto& t : idx.vertices())
            for (int i = 1; i <= 3; ++i)
                REQUIRE(level_value(apply_move(i, t, ctx), ctx) == 4 % p);
    }
}

TEST_CASE("monomial action of m3 swaps the z roots") {
    PrimeContext ctx(11);
    std::mt19937_64 rng(1);
    Mat2 m3 = generator_matrix(3);
    for (int trial = 0; trial < 100; ++trial) {
        CayleyPoint pt{random_fp_star(rng, ctx), random_fp_star(rng, ctx)};
        CayleyPoint img = monomial_action(m3, pt, ctx);
        // (xi, eta) -> (xi^-1, eta)
        CHECK(img.xi == fp2_inv(pt.xi, ctx));
        CHECK(img.eta == pt.eta);
        CayleyTriple t = derived_triple(pt, ctx);
        CayleyTriple u = derived_triple(img, ctx);
        CHECK(u.x == t.x);
        CHECK(u.y == t.y);
        // z+ and z- sum to xy
        CHECK(fp2_add(u.z, t.z, ctx) == fp2_mul(t.x, t.y, ctx));
        // and the image triple is exactly the third Markoff move of t
        CHECK(u == apply_move_fp2(3, t, ctx));
    }
}

TEST_CASE("monomial matrices compose in letter order") {
    // right action: applying M then N is the map of M N
    PrimeContext ctx(11);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<uint8_t> s1, s2;
        for (std::size_t i = 0, n = 1 + uniform_below(rng, 4); i < n; ++i)
            s1.push_back(uint8_t(1 + uniform_below(rng, 3)));
        for (std::size_t i = 0, n = 1 + uniform_below(rng, 4); i < n; ++i)
            s2.push_back(uint8_t(1 + uniform_below(rng, 3)));
        Word w1 = reduce(s1), w2 = reduce(s2);
        std::vector<uint8_t> cat = s1;
        cat.insert(cat.end(), s2.begin(), s2.end());
        REQUIRE(monomial_matrix(reduce(cat)) == mat_mul(monomial_matrix(w1), monomial_matrix(w2)));

        CayleyPoint pt{random_fp_star(rng, ctx), random_fp_star(rng, ctx)};
        CayleyPoint one_shot = monomial_action(monomial_matrix(reduce(cat)), pt, ctx);
        CayleyPoint two_step =
            monomial_action(monomial_matrix(w2), monomial_action(monomial_matrix(w1), pt, ctx), ctx);
        REQUIRE(derived_triple(one_shot, ctx) == derived_triple(two_step, ctx));
    }
}

TEST_CASE("polynomial and monomial actions agree") {
    PrimeContext ctx(11);
    CHECK(word_action_matches(word_from({3}), ctx, 100));
    CHECK(word_action_matches(word_from({1}), ctx, 100));
    CHECK(word_action_matches(word_from({2}), ctx, 100));
    CHECK(word_action_matches(word_from({1, 2, 3}), ctx, 100));
    CHECK(word_action_matches(word_from({2, 3, 2, 3}), ctx, 100));
    for (std::size_t L = 1; L <= 5; ++L)
        for (const Word& w : enumerate_reduced_words(L))
            REQUIRE(word_action_matches(w, ctx, 20));
    CHECK_THROWS_AS(word_action_matches(Word{}, ctx, 10), IdentityInputError);
}

TEST_CASE("free product witnesses exist for short words") {
    PrimeContext ctx(11);
    // m3 fixes both scan lines; the generic family must catch it
    auto w3 = free_product_witness(word_from({3}), ctx);
    REQUIRE(w3.has_value());
    CayleyTriple t = derived_triple(*w3, ctx);
    REQUIRE_FALSE(apply_word_fp2(word_from({3}), t, ctx) == t);

    for (std::size_t L = 1; L <= 6; ++L)
        for (const Word& w : enumerate_reduced_words(L))
            REQUIRE(free_product_witness(w, ctx).has_value());

    CHECK_THROWS_AS(free_product_witness(Word{}, ctx), IdentityInputError);
}

TEST_CASE("summary json") {
    PrimeContext ctx(7);
    CayleySummary s = verify_free_product(ctx, 3, 10);
    CHECK(s.words_checked == 3 + 6 + 12);
    CHECK(s.witnesses_found == s.words_checked);
    CHECK(s.all_matched);
    nlohmann::json j = cayley_summary_json(s);
    CHECK(j["p"] == 7);
    CHECK(j["all_matched"] == true);
}
