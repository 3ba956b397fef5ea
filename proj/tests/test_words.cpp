#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "markoff/words.hpp"

using namespace markoff;

TEST_CASE("reduce cancels adjacent involutions") {
    CHECK(reduce({1, 1, 2}) == word_from({2}));
    CHECK(reduce({2, 3, 3, 2}) == Word{});
    CHECK(reduce({1, 2, 3}) == word_from({1, 2, 3}));
    CHECK(reduce({}) == Word{});
}

TEST_CASE("cyclic reduction and torsion") {
    CHECK(cyclic_reduce(word_from({2, 3, 2})) == word_from({3}));
    CHECK(cyclic_reduce(word_from({1, 2, 3})) == word_from({1, 2, 3}));
    CHECK(cyclic_reduce(Word{}) == Word{});

    CHECK(is_torsion(word_from({2, 3, 2})));
    CHECK_FALSE(is_torsion(word_from({2, 3})));
    CHECK_FALSE(is_torsion(Word{}));
    CHECK(is_torsion(word_from({1})));
}

TEST_CASE("enumerate_reduced_words counts and order") {
    CHECK(enumerate_reduced_words(0).size() == 1);
    CHECK(enumerate_reduced_words(1).size() == 3);
    auto l2 = enumerate_reduced_words(2);
    REQUIRE(l2.size() == 6);
    CHECK(l2[0].str() == "12");
    CHECK(l2[1].str() == "13");
    CHECK(l2[2].str() == "21");
    CHECK(l2[3].str() == "23");
    CHECK(l2[4].str() == "31");
    CHECK(l2[5].str() == "32");
    for (std::size_t L = 3; L <= 12; ++L)
        CHECK(enumerate_reduced_words(L).size() == (std::size_t(3) << (L - 1)));
}

TEST_CASE("walk_count against brute-force sequence enumeration") {
    CHECK(walk_count(2, Word{}) == 3);
    CHECK(walk_count(4, Word{}) == 15);
    CHECK(walk_count(3, Word{}) == 0);

    for (std::size_t L = 0; L <= 8; ++L) {
        std::map<std::string, unsigned long long> tally;
        std::vector<uint8_t> seq(L, 1);
        unsigned long long total = 1;
        for (std::size_t i = 0; i < L; ++i) total *= 3;
        for (unsigned long long code = 0; code < total; ++code) {
            unsigned long long c = code;
            for (std::size_t i = 0; i < L; ++i) {
                seq[i] = uint8_t(1 + c % 3);
                c /= 3;
            }
            ++tally[reduce(seq).str()];
        }
        for (std::size_t d = 0; d <= L; ++d) {
            for (const Word& w : enumerate_reduced_words(d)) {
                auto it = tally.find(w.str());
                unsigned long long expected = it == tally.end() ? 0 : it->second;
                REQUIRE(walk_count(L, w) == u128(expected));
            }
        }
    }
}

TEST_CASE("total walk mass is 3^L") {
    for (std::size_t L = 0; L <= 12; ++L) {
        auto row = tree_walk_row(L);
        u128 total = 0;
        for (std::size_t d = 0; d <= L; ++d) {
            u128 words = d == 0 ? 1 : (u128(3) << (d - 1));
            total += words * row[d];
        }
        u128 expect = 1;
        for (std::size_t i = 0; i < L; ++i) expect *= 3;
        CHECK(total == expect);
    }
}

TEST_CASE("word_to_matrix basics") {
    CHECK(word_to_matrix(Word{}) == Mat2::identity());
    CHECK(word_to_matrix(word_from({3})) == Mat2{-1, 0, 0, 1});
    // matrix of g1 g2 (g1 applied first) is [m2][m1]
    CHECK(word_to_matrix(word_from({1, 2})) == Mat2{3, -2, 2, -1});
    CHECK(max_entry(Mat2::identity()) == 1);
    CHECK(max_entry(generator_matrix(1)) == 2);
}

TEST_CASE("generator matrices are involutions") {
    for (int i = 1; i <= 3; ++i)
        CHECK(mat_mul(generator_matrix(i), generator_matrix(i)) == Mat2::identity());
}

TEST_CASE("composition convention: matrix of concatenation is reversed product") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<uint8_t> s1, s2;
        for (std::size_t i = 0, n = uniform_below(rng, 8); i < n; ++i)
            s1.push_back(uint8_t(1 + uniform_below(rng, 3)));
        for (std::size_t i = 0, n = uniform_below(rng, 8); i < n; ++i)
            s2.push_back(uint8_t(1 + uniform_below(rng, 3)));
        std::vector<uint8_t> cat = s1;
        cat.insert(cat.end(), s2.begin(), s2.end());
        Mat2 lhs = word_to_matrix(reduce(cat));
        Mat2 rhs = mat_mul(word_to_matrix(reduce(s2)), word_to_matrix(reduce(s1)));
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("entry bound, determinant parity, torsion cross-check, exhaustive L <= 10") {
    for (std::size_t L = 0; L <= 10; ++L) {
        i128 cap = 1;
        for (std::size_t i = 0; i < L; ++i) cap *= 4;
        for (const Word& w : enumerate_reduced_words(L)) {
            Mat2 m = word_to_matrix(w);
            REQUIRE(max_entry(m) <= cap);
            REQUIRE(mat_det(m) == (L % 2 == 0 ? 1 : -1));
            if (L > 0) {
                REQUIRE_FALSE(m.is_plus_minus_identity());
                Mat2 sq = mat_mul(m, m);
                REQUIRE(is_torsion(w) == sq.is_plus_minus_identity());
                PowerClassification pc = classify_power(m);
                REQUIRE(pc.K >= 1);
                REQUIRE(pc.K <= 8);
                if (is_torsion(w)) REQUIRE(pc.cls == PowerClass::Torsion);
            }
        }
    }
}

TEST_CASE("classify_power canonical cases") {
    PowerClassification t = classify_power(generator_matrix(3));
    CHECK(t.K == 1);
    CHECK(t.cls == PowerClass::Torsion);

    PowerClassification par = classify_power(Mat2{1, 1, 0, 1});
    CHECK(par.K == 1);
    CHECK(par.cls == PowerClass::StandardParabolic);
    CHECK(par.n == 1);
    CHECK(par.side == ParabolicSide::Upper);
    CHECK(par.sign == +1);

    PowerClassification neg = classify_power(Mat2{-1, 0, -5, -1});
    CHECK(neg.cls == PowerClass::StandardParabolic);
    CHECK(neg.n == 5);
    CHECK(neg.side == ParabolicSide::Lower);
    CHECK(neg.sign == -1);

    // [1,2] -> [[3,-2],[2,-1]]; its square [[5,-4],[4,-3]] has all entries >= 2
    PowerClassification gen = classify_power(word_to_matrix(word_from({1, 2})));
    CHECK(gen.K == 2);
    CHECK(gen.cls == PowerClass::Generic);
    CHECK(mat_pow(word_to_matrix(word_from({1, 2})), 2) == Mat2{5, -4, 4, -3});

    CHECK_THROWS_AS(classify_power(Mat2::identity()), IdentityInputError);
    CHECK_THROWS_AS(classify_power(Mat2{-1, 0, 0, -1}), IdentityInputError);
}

TEST_CASE("word length guard") {
    Word w;
    for (int i = 0; i < 61; ++i) w.letters.push_back(uint8_t(1 + i % 2));
    CHECK_THROWS_AS(word_to_matrix(w), OverflowError);
}
