#pragma once

#include <gmpxx.h>

#include <climits>
#include <cstdint>
#include <string>
#include <vector>

namespace gkq {

using BigInt = mpz_class;
using Rat = mpq_class;

// Valuation of zero.
inline constexpr int kInfVal = INT_MAX;

int valuation(const BigInt& x, long p);
int valuation(const Rat& x, long p);

BigInt ipow(long base, unsigned e);
// a/b in lowest terms (mpq_class(a, b) alone does not reduce).
Rat frac(const BigInt& num, const BigInt& den);

// p^e for any integer e, as a rational.
Rat rpow(long p, int e);

// Gaussian binomial (d choose m)_f.
BigInt q_binomial(int d, int m, long f);

int kronecker_symbol(const BigInt& a, const BigInt& n);
BigInt fundamental_discriminant(const BigInt& D);
bool is_square(const BigInt& x);

std::string to_string(const Rat& x);

// Univariate polynomial with integer coefficients, index = degree.
class UniPoly {
public:
    static constexpr int kZeroDegree = INT_MIN;

    UniPoly() = default;
    explicit UniPoly(std::vector<BigInt> coeffs);
    static UniPoly constant(const BigInt& c);
    static UniPoly x();
    // 1 + c X^e
    static UniPoly one_plus(const BigInt& c, int e);

    int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<BigInt>& coeffs() const { return c_; }
    BigInt coeff(int i) const;

    UniPoly operator+(const UniPoly& o) const;
    UniPoly operator-(const UniPoly& o) const;
    UniPoly operator*(const UniPoly& o) const;
    UniPoly operator*(const BigInt& s) const;
    UniPoly& operator+=(const UniPoly& o) { return *this = *this + o; }
    UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }
    bool operator==(const UniPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UniPoly& o) const { return !(c_ == o.c_); }

    // P(s X)
    UniPoly scale_var(const BigInt& s) const;
    UniPoly shift_degree(int e) const;

    std::string to_string() const;

private:
    void strip();
    std::vector<BigInt> c_;
};

Rat poly_eval(const UniPoly& P, const Rat& x);
UniPoly poly_derivative(const UniPoly& P);
// Exact quotient P / D where D has constant term +-1; throws if the remainder is nonzero.
UniPoly divide_exact(const UniPoly& P, const UniPoly& D);

}  // namespace gkq
