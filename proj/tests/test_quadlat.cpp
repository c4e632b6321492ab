#include <doctest.h>

#include <random>

#include "gkq/quadlat.hpp"
#include "gkq/realize.hpp"
#include "gkq/siegel.hpp"

using namespace gkq;

namespace {

GramMatrix od_z2() { return orthogonal_sum(make_gram(2, {{2, 1}, {1, 2}}), make_gram(2, {{4, 2}, {2, 4}})); }

Mat random_unimodular(int n, std::mt19937_64& rng) {
    Mat U = identity_mat(n);
    std::uniform_int_distribution<int> pick(0, n - 1), coef(-4, 4);
    for (int s = 0; s < 5 * n; ++s) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int c = coef(rng);
        for (int r = 0; r < n; ++r) U[r][j] += c * U[r][i];
    }
    return U;
}

}  // namespace

TEST_SUITE("quadlat") {

TEST_CASE("transform") {
    GramMatrix B = diagonal_gram(3, {1, 3});
    CHECK(transform(B, identity_mat(2)) == B);
    GramMatrix H = make_gram(2, {{0, 1}, {1, 0}});
    CHECK(transform(H, {{1, 1}, {0, 1}}).G == Mat{{0, 1}, {1, 2}});
    CHECK_THROWS_AS(transform(B, {{1, 0}, {0, 3}}), std::domain_error);
    Mat U = {{2, 1}, {1, 1}}, Uinv = {{1, -1}, {-1, 2}};
    CHECK(transform(transform(B, U), Uinv) == B);
}

TEST_CASE("gk invariant examples") {
    GKInvariant g = gk_invariant(diagonal_gram(3, {1, 3, 27}));
    CHECK(g.a == std::vector<int>{0, 1, 3});
    CHECK(g.certainty == Certainty::Certified);
    CHECK(gk_invariant(make_gram(2, {{2, 1}, {1, 2}})).a == std::vector<int>{0, 0});
    CHECK(gk_invariant(make_gram(2, {{4, 2}, {2, 4}})).a == std::vector<int>{1, 1});
    CHECK(gk_invariant(make_gram(3, {{2, 0}, {0, 6}})).a == std::vector<int>{0, 1});
    CHECK_THROWS_AS(gk_invariant(make_gram(3, {{2, 2}, {2, 2}})), std::domain_error);
}

TEST_CASE("best sequence in S") {
    CHECK(best_sequence_in_S(diagonal_gram(3, {1, 3})).a == std::vector<int>{0, 1});
    CHECK(best_sequence_in_S(make_gram(2, {{0, 1}, {1, 0}})).a == std::vector<int>{0, 0});
    CHECK(best_sequence_in_S(diagonal_gram(5, {25, 25})).a == std::vector<int>{2, 2});
}

TEST_CASE("admissible involutions and reduced forms") {
    CHECK(is_admissible_involution({0, 0, 1, 1}, {1, 0, 3, 2}));
    CHECK(is_reduced_form(od_z2(), {0, 0, 1, 1}, {1, 0, 3, 2}));
    CHECK(is_admissible_involution({0, 1}, {0, 1}));
}

TEST_CASE("classified rank-4 shapes over Z_2") {
    GramMatrix od = od_z2();
    REQUIRE(z2_shape_case(od) == Z2Case::I);
    CHECK(gk_anisotropic_z2(od, Z2Case::I).a == std::vector<int>{0, 0, 1, 1});

    GramMatrix b3 = diagonal_gram(2, {1, 1, 2, 2});
    REQUIRE(is_anisotropic(b3));
    REQUIRE(z2_shape_case(b3) == Z2Case::IIIb);
    CHECK(gk_anisotropic_z2(b3, Z2Case::IIIb).a == std::vector<int>{0, 1, 2, 3});

    GramMatrix b2 = make_gram(2, {{4, 2, 0, 0}, {2, 4, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 6}});
    REQUIRE(is_anisotropic(b2));
    REQUIRE(z2_shape_case(b2) == Z2Case::II);
    CHECK(gk_anisotropic_z2(b2, Z2Case::II).a == std::vector<int>{0, 1, 1, 2});

    CHECK_THROWS_AS(gk_anisotropic_z2(b2, Z2Case::I), std::domain_error);
}

TEST_CASE("shape closed form agrees with the general search") {
    // small totals keep the general p = 2 search quick
    auto cat = anisotropic_catalog(2, 4, 3, 4);
    int compared = 0;
    for (const auto& [gk, lats] : cat)
        for (const auto& L : lats) {
            GKInvariant g = gk_invariant(L);
            if (g.certainty != Certainty::Certified) continue;
            CHECK(g.a == gk);
            ++compared;
        }
    CHECK(compared > 0);
}

TEST_CASE("residue types") {
    for (long p : {2L, 3L, 5L}) CHECK(residue_type(make_gram(p, {{0, 1}, {1, 0}})) == ResidueType{2, 1});
    CHECK(residue_type(diagonal_gram(3, {3, 3})) == ResidueType{0, 1});
    CHECK(residue_type(make_gram(2, {{2, 1}, {1, 2}})) == ResidueType{2, -1});
    CHECK(residue_type(diagonal_gram(3, {1, 3})) == ResidueType{1, 0});
}

TEST_CASE("dual lattice") {
    RMat D = dual_lattice(diagonal_gram(3, {1, 3}));
    CHECK(valuation(det(D), 3) == -1);
    RMat H = dual_lattice(make_gram(2, {{0, 1}, {1, 0}}));
    CHECK(valuation(det(H), 2) == 0);
}

TEST_CASE("integral overlattices") {
    auto a = integral_overlattices(diagonal_gram(3, {9}));
    CHECK(a.size() == 2);
    CHECK(integral_overlattices(diagonal_gram(3, {1, 2})).size() == 1);
    auto b = integral_overlattices(diagonal_gram(3, {1, 9}));
    REQUIRE(b.size() == 2);
    int idx1 = b[0].index_b == 1 ? 0 : 1;
    CHECK(b[idx1].index_b == 1);
    CHECK(gk_invariant(b[idx1].gram).a == std::vector<int>{0, 0});
}

TEST_CASE("anisotropy") {
    CHECK(is_anisotropic(od_z2()));
    for (long p : {2L, 3L, 5L}) CHECK_FALSE(is_anisotropic(make_gram(p, {{0, 1}, {1, 0}})));
    CHECK_FALSE(is_anisotropic(diagonal_gram(3, {1, -1})));
    CHECK(is_anisotropic(diagonal_gram(3, {1, 1})));  // -1 is a nonsquare mod 3
    CHECK_FALSE(is_anisotropic(diagonal_gram(5, {1, 1})));
}

TEST_CASE("gk is invariant under unimodular change of basis") {
    std::mt19937_64 rng(3);
    for (long p : {3L, 5L})
        for (const auto& b : std::vector<std::vector<BigInt>>{{1, p, p * p * p}, {2, p * p}, {p, p, 1}, {1, 1, p * p}}) {
            GramMatrix L = diagonal_gram(p, b);
            GKInvariant g = gk_invariant(L);
            for (int t = 0; t < 100; ++t) CHECK(gk_invariant(transform(L, random_unimodular(L.n, rng))) == g);
        }
}

TEST_CASE("overlattice of index p^b lowers |GK| by 2b") {
    for (long p : {3L, 5L})
        for (const auto& b : std::vector<std::vector<BigInt>>{{p * p * p}, {1, p * p * p * p}, {p * p, p * p}, {1, p, p * p * p}}) {
            GramMatrix L = diagonal_gram(p, b);
            int t = gk_invariant(L).total();
            for (const auto& ov : integral_overlattices(L)) CHECK(gk_invariant(ov.gram).total() == t - 2 * ov.index_b);
        }
}

TEST_CASE("number of zeros in GK equals the residue dimension") {
    for (long p : {3L, 5L})
        for (const auto& b : std::vector<std::vector<BigInt>>{{1, p}, {1, 2, p * p}, {p, p, p}, {1, 1, 1}}) {
            GramMatrix L = diagonal_gram(p, b);
            auto g = gk_invariant(L).a;
            CHECK(residue_type(L).a == std::count(g.begin(), g.end(), 0));
        }
    for (const auto& [gk, lats] : anisotropic_catalog(2, 4, 5, 6))
        CHECK(residue_type(lats.front()).a == std::count(gk.begin(), gk.end(), 0));
}

TEST_CASE("anisotropic GK parity pattern") {
    for (long p : {2L, 3L})
        for (int n = 3; n <= 4; ++n)
            for (const auto& [gk, lats] : anisotropic_catalog(p, n, 6, 6)) {
                int even = 0;
                for (int a : gk) even += a % 2 == 0;
                if (n == 3)
                    CHECK((even == 1 || even == 2));
                else
                    CHECK(even == 2);
            }
}

TEST_CASE("best sequence never exceeds GK") {
    for (const auto& L : {diagonal_gram(3, {1, 3, 9}), od_z2(), make_gram(2, {{2, 1}, {1, 2}})}) {
        auto s = best_sequence_in_S(L).a, g = gk_invariant(L).a;
        CHECK_FALSE(lex_less(g, s));
    }
}

TEST_CASE("maximal anisotropic lattices have no proper overlattices") {
    for (long p : {2L, 3L})
        for (int n = 1; n <= 4; ++n)
            for (const auto& [gk, lats] : anisotropic_catalog(p, n, 1, 4))
                for (const auto& L : lats) CHECK(integral_overlattices(L).size() == 1);
}

TEST_CASE("lattice JSON round trip") {
    GramMatrix L = make_gram(3, {{2, 1}, {1, 6}});
    CHECK(gram_from_json(to_json(L)) == L);
    CHECK_THROWS(gram_from_json("{\"p\":3,\"n\":2,\"gram2\":[[1,0],[0,2]]}"));
}

}
