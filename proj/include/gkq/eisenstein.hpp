#pragma once

#include "gkq/exactmath.hpp"

namespace gkq {

// T = [[m1, beta/2], [beta/2, m2]]
struct BinaryT {
    long m1 = 0, m2 = 0, beta = 0;
    BigInt det2() const { return 4 * BigInt(m1) * m2 - BigInt(beta) * beta; }
};

// Hurwitz class number of discriminant -N (reduced forms, weights 1/2 and 1/3).
Rat hurwitz(long N);
// Same count, enumerating by b then a instead of a then b; used as a cross-check.
Rat hurwitz_by_b(long N);

// Divisor range in sum_{d} d H(det(2T)/d^2): d | cont(T) = gcd(m1, m2, beta), or the
// alternative d | cont(2T) = gcd(2m1, 2m2, beta).  Only ContT matches the intersection numbers.
enum class HurwitzConvention { ContT, ContTwoT };

Rat c_over_288(const BinaryT& T, HurwitzConvention conv = HurwitzConvention::ContT);
int chi_T(const BinaryT& T, long p);

enum class ChiFilter { All, Split, NonSplit };
Rat eisenstein_sum(long m1, long m2, long p, ChiFilter filter,
                  HurwitzConvention conv = HurwitzConvention::ContT);

BigInt d_one_m(long m);
// sum over n^2 | m of mu(n) d_one_m(m/n^2): degree of psi_m(x, x); m must not be a square
BigInt d_one_m_primitive(long m);

}  // namespace gkq
