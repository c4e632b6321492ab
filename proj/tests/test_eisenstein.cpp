#include <doctest.h>

#include <numeric>

#include "gkq/eisenstein.hpp"

using namespace gkq;

namespace {

long sigma1(long n) {
    long s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return s;
}

}  // namespace

TEST_SUITE("eisenstein") {

TEST_CASE("Hurwitz class numbers") {
    CHECK(hurwitz(3) == frac(1, 3));
    CHECK(hurwitz(4) == frac(1, 2));
    CHECK(hurwitz(23) == 3);
    CHECK(hurwitz(12) == frac(4, 3));
    CHECK(hurwitz(1) == 0);
    CHECK(hurwitz(6) == 0);
    CHECK_THROWS_AS(hurwitz(-3), std::domain_error);
}

TEST_CASE("two enumeration orders agree") {
    for (long N = 0; N <= 200; ++N) CHECK(hurwitz(N) == hurwitz_by_b(N));
}

TEST_CASE("Kronecker-Hurwitz class number relation") {
    // sum over s of H(4n - s^2) = 2 sigma(n) - sum_{d|n} min(d, n/d), with H(0) = -1/12
    for (long n = 1; n <= 60; ++n) {
        Rat lhs = 0;
        for (long s = -2 * n; s <= 2 * n; ++s) {
            long arg = 4 * n - s * s;
            if (arg < 0) continue;
            lhs += arg == 0 ? frac(-1, 12) : hurwitz(arg);
        }
        long rhs = 2 * sigma1(n);
        for (long d = 1; d <= n; ++d)
            if (n % d == 0) rhs -= std::min(d, n / d);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("c(T)/288") {
    CHECK(c_over_288({1, 1, 1}) == frac(1, 3));
    CHECK(c_over_288({2, 2, 2}) == 2);
    CHECK(c_over_288({1, 1, 0}) == frac(1, 2));
    // cont(T) = 1 but 2 | cont(2T)
    CHECK(c_over_288({1, 1, 0}, HurwitzConvention::ContTwoT) == frac(1, 2));
}

TEST_CASE("chi_T") {
    CHECK(chi_T({1, 1, 0}, 5) == 1);
    CHECK(chi_T({1, 1, 1}, 3) == 0);
    CHECK(chi_T({1, 1, 0}, 3) == -1);
}

TEST_CASE("Eisenstein coefficient sums") {
    CHECK(eisenstein_sum(2, 3, 5, ChiFilter::All) == 18);
    CHECK(eisenstein_sum(3, 5, 7, ChiFilter::All) == 40);
    CHECK(eisenstein_sum(2, 3, 5, ChiFilter::Split) == 2);
    CHECK(eisenstein_sum(2, 3, 5, ChiFilter::NonSplit) == 16);
    CHECK_THROWS_AS(eisenstein_sum(2, 8, 5, ChiFilter::All), std::domain_error);
    CHECK_THROWS_AS(eisenstein_sum(1, 1, 5, ChiFilter::All), std::domain_error);
}

TEST_CASE("filters partition the sum") {
    for (long p : {2L, 3L, 5L, 7L})
        for (long m1 = 1; m1 <= 8; ++m1)
            for (long m2 = m1; m2 <= 8; ++m2) {
                if (is_square(BigInt(m1 * m2))) continue;
                CHECK(eisenstein_sum(m1, m2, p, ChiFilter::Split) + eisenstein_sum(m1, m2, p, ChiFilter::NonSplit) ==
                      eisenstein_sum(m1, m2, p, ChiFilter::All));
            }
}

TEST_CASE("total is symmetric and independent of p") {
    for (long m1 = 1; m1 <= 9; ++m1)
        for (long m2 = 1; m2 <= 9; ++m2) {
            if (is_square(BigInt(m1 * m2))) continue;
            Rat ref = eisenstein_sum(m1, m2, 2, ChiFilter::All);
            CHECK(eisenstein_sum(m2, m1, 2, ChiFilter::All) == ref);
            for (long p : {3L, 5L, 11L}) CHECK(eisenstein_sum(m1, m2, p, ChiFilter::All) == ref);
        }
}

TEST_CASE("the cont(2T) divisor range does not fit") {
    CHECK(eisenstein_sum(2, 3, 5, ChiFilter::All, HurwitzConvention::ContTwoT) == 18);
    CHECK(eisenstein_sum(3, 5, 5, ChiFilter::All, HurwitzConvention::ContTwoT) == 48);
    CHECK(eisenstein_sum(8, 9, 5, ChiFilter::All, HurwitzConvention::ContTwoT) == 474);
    CHECK(eisenstein_sum(8, 9, 5, ChiFilter::All) == 342);
}

TEST_CASE("d(1, m)") {
    CHECK(d_one_m(1) == 1);
    CHECK(d_one_m(2) == 4);
    CHECK(d_one_m(4) == 10);
    CHECK(d_one_m(8) == 24);
    CHECK(d_one_m_primitive(8) == 20);
    CHECK(d_one_m_primitive(2) == 4);
    CHECK_THROWS_AS(d_one_m_primitive(4), std::domain_error);
}

}
