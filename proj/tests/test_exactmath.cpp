#include <doctest.h>

#include <random>

#include "gkq/exactmath.hpp"

using namespace gkq;

TEST_SUITE("exactmath") {

TEST_CASE("valuation") {
    CHECK(valuation(BigInt(18), 3) == 2);
    CHECK(valuation(BigInt(1), 5) == 0);
    CHECK(valuation(frac(3, 4), 2) == -2);
    CHECK(valuation(BigInt(0), 7) == kInfVal);
}

TEST_CASE("frac reduces") {
    Rat x = frac(2, 2);
    CHECK(x.get_num() == 1);
    CHECK(x.get_den() == 1);
    CHECK(frac(6, -4) == frac(-3, 2));
    CHECK(frac(6, -4).get_den() == 2);
    CHECK_THROWS(frac(1, 0));
}

TEST_CASE("q-binomial values") {
    for (long f : {2L, 3L, 5L}) {
        CHECK(q_binomial(2, 1, f) == f + 1);
        CHECK(q_binomial(3, 0, f) == 1);
    }
    CHECK(q_binomial(4, 2, 2) == 35);
    CHECK_THROWS_AS(q_binomial(2, 3, 2), std::domain_error);
}

TEST_CASE("q-binomial alternating sum vanishes") {
    for (long f : {2L, 3L, 5L})
        for (int m = 1; m <= 8; ++m) {
            BigInt s = 0;
            for (int k = 0; k <= m; ++k) {
                BigInt t = ipow(f, static_cast<unsigned>(k * (k - 1) / 2)) * q_binomial(m, k, f);
                s += k % 2 ? BigInt(-t) : t;
            }
            CHECK(s == 0);
        }
}

TEST_CASE("evaluation and derivative") {
    UniPoly one_minus_x({1, -1});
    CHECK(poly_eval(one_minus_x, 1) == 0);
    CHECK(poly_derivative(one_minus_x) == UniPoly::constant(-1));
    UniPoly F = one_minus_x * UniPoly({1, 3});
    CHECK(poly_eval(F, frac(1, 3)) == frac(4, 3));
    CHECK(UniPoly().degree() == UniPoly::kZeroDegree);
    CHECK(UniPoly({1, 2, 0, 0}).degree() == 1);
}

TEST_CASE("derivative matches the Taylor expansion") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> c(-9, 9);
    for (int t = 0; t < 50; ++t) {
        std::vector<BigInt> co;
        for (int i = 0; i <= 5; ++i) co.push_back(c(rng));
        UniPoly P(co);
        Rat x = frac(c(rng), 7), h = frac(c(rng), 11);
        // P(x+h) = sum_k P^(k)(x) h^k / k!
        Rat s = 0, hk = 1, fact = 1;
        UniPoly D = P;
        for (int k = 0; k <= 6; ++k) {
            s += poly_eval(D, x) * hk / fact;
            D = poly_derivative(D);
            hk *= h;
            fact *= k + 1;
        }
        CHECK(s == poly_eval(P, x + h));
    }
}

TEST_CASE("exact rational round trips") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> c(-1000000, 1000000);
    for (int t = 0; t < 200; ++t) {
        Rat a = frac(c(rng), c(rng) | 1), b = frac(c(rng), c(rng) | 1);
        CHECK((a + b) - b == a);
        if (b != 0) CHECK((a * b) / b == a);
    }
}

TEST_CASE("kronecker symbol and fundamental discriminant") {
    CHECK(kronecker_symbol(-4, 5) == 1);
    CHECK(kronecker_symbol(-3, 3) == 0);
    CHECK(kronecker_symbol(-4, 3) == -1);
    CHECK(kronecker_symbol(5, 2) == -1);
    CHECK(kronecker_symbol(-7, 2) == 1);
    CHECK(fundamental_discriminant(-12) == -3);
    CHECK(fundamental_discriminant(-4) == -4);
    CHECK(fundamental_discriminant(-8 * 9) == -8);
    CHECK_THROWS_AS(fundamental_discriminant(16), std::domain_error);
}

TEST_CASE("exact division") {
    UniPoly a({1, -1}), b({1, 2, 3});
    CHECK(divide_exact(a * b, a) == b);
    CHECK_THROWS(divide_exact(b, a));
}

}
