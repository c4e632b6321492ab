#include "gkq/exactmath.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gkq {

int valuation(const BigInt& x, long p) {
    if (x == 0) return kInfVal;
    BigInt y = abs(x);
    int v = 0;
    while (mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

int valuation(const Rat& x, long p) {
    if (x == 0) return kInfVal;
    return valuation(BigInt(x.get_num()), p) - valuation(BigInt(x.get_den()), p);
}

BigInt ipow(long base, unsigned e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(std::abs(base)), e);
    if (base < 0 && (e & 1)) r = -r;
    return r;
}

Rat frac(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("frac: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat rpow(long p, int e) {
    if (e >= 0) return Rat(ipow(p, static_cast<unsigned>(e)));
    return Rat(BigInt(1), ipow(p, static_cast<unsigned>(-e)));
}

BigInt q_binomial(int d, int m, long f) {
    if (m < 0 || m > d || f < 2) throw std::domain_error("q_binomial: need 0 <= m <= d and f >= 2");
    // [t]_f = (f^t - 1)/(f - 1)
    auto fact = [f](int k) {
        BigInt r = 1;
        for (int t = 1; t <= k; ++t) r *= (ipow(f, t) - 1) / (f - 1);
        return r;
    };
    BigInt num = fact(d);
    BigInt den = fact(m) * fact(d - m);
    if (num % den != 0) throw std::logic_error("q_binomial: non-integral quotient");
    return num / den;
}

int kronecker_symbol(const BigInt& a_in, const BigInt& n_in) {
    BigInt a = a_in, n = n_in;
    if (n == 0) return (abs(a) == 1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    // factor out powers of two from n: (a/2) = 0 if a even, else +-1 by a mod 8
    int twos = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++twos;
    }
    if (twos > 0) {
        if (a % 2 == 0) return 0;
        BigInt r8 = a % 8;
        if (r8 < 0) r8 += 8;
        if ((twos & 1) && (r8 == 3 || r8 == 5)) sign = -sign;
    }
    // Jacobi symbol (a/n) with n odd positive
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            BigInt r8 = n % 8;
            if (r8 == 3 || r8 == 5) sign = -sign;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

bool is_square(const BigInt& x) {
    if (x < 0) return false;
    return mpz_perfect_square_p(x.get_mpz_t()) != 0;
}

BigInt fundamental_discriminant(const BigInt& D) {
    if (D == 0 || is_square(D)) throw std::domain_error("fundamental_discriminant: D is a square");
    // squarefree part by trial division
    BigInt rest = abs(D), core = 1;
    for (BigInt q = 2; q * q <= rest; ++q) {
        int e = 0;
        while (rest % q == 0) {
            rest /= q;
            ++e;
        }
        if (e & 1) core *= q;
    }
    core *= rest;
    if (D < 0) core = -core;
    BigInt r4 = core % 4;
    if (r4 < 0) r4 += 4;
    return r4 == 1 ? core : 4 * core;
}

std::string to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

UniPoly::UniPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { strip(); }

UniPoly UniPoly::constant(const BigInt& c) { return UniPoly(std::vector<BigInt>{c}); }

UniPoly UniPoly::x() { return UniPoly(std::vector<BigInt>{0, 1}); }

UniPoly UniPoly::one_plus(const BigInt& c, int e) {
    std::vector<BigInt> v(static_cast<size_t>(e) + 1, BigInt(0));
    v[0] += 1;
    v[static_cast<size_t>(e)] += c;
    return UniPoly(std::move(v));
}

BigInt UniPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
    return c_[static_cast<size_t>(i)];
}

void UniPoly::strip() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
    std::vector<BigInt> r(std::max(c_.size(), o.c_.size()), BigInt(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + o * BigInt(-1); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigInt> r(c_.size() + o.c_.size() - 1, BigInt(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return UniPoly(std::move(r));
}

UniPoly UniPoly::operator*(const BigInt& s) const {
    std::vector<BigInt> r = c_;
    for (auto& x : r) x *= s;
    return UniPoly(std::move(r));
}

UniPoly UniPoly::scale_var(const BigInt& s) const {
    std::vector<BigInt> r = c_;
    BigInt f = 1;
    for (auto& x : r) {
        x *= f;
        f *= s;
    }
    return UniPoly(std::move(r));
}

UniPoly UniPoly::shift_degree(int e) const {
    if (is_zero()) return {};
    std::vector<BigInt> r(static_cast<size_t>(e), BigInt(0));
    r.insert(r.end(), c_.begin(), c_.end());
    return UniPoly(std::move(r));
}

std::string UniPoly::to_string() const {
    if (c_.empty()) return "[0]";
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i].get_str();
    os << "]";
    return os.str();
}

Rat poly_eval(const UniPoly& P, const Rat& x) {
    Rat acc = 0;
    const auto& c = P.coeffs();
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + Rat(c[i]);
    acc.canonicalize();
    return acc;
}

UniPoly poly_derivative(const UniPoly& P) {
    const auto& c = P.coeffs();
    if (c.size() <= 1) return {};
    std::vector<BigInt> r(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r[i - 1] = c[i] * static_cast<unsigned long>(i);
    return UniPoly(std::move(r));
}

UniPoly divide_exact(const UniPoly& P, const UniPoly& D) {
    if (D.is_zero() || abs(D.coeff(0)) != 1) throw std::domain_error("divide_exact: divisor needs constant term +-1");
    if (P.is_zero()) return {};
    int dq = P.degree() - D.degree();
    if (dq < 0) throw std::logic_error("divide_exact: nonzero remainder");
    // power-series division from the constant term up, then verify
    std::vector<BigInt> q(static_cast<size_t>(dq) + 1, BigInt(0));
    const BigInt d0 = D.coeff(0);
    for (int i = 0; i <= dq; ++i) {
        BigInt s = P.coeff(i);
        for (int j = 1; j <= std::min(i, D.degree()); ++j) s -= D.coeff(j) * q[static_cast<size_t>(i - j)];
        q[static_cast<size_t>(i)] = s * d0;  // d0 = +-1 is its own inverse
    }
    UniPoly Q(std::move(q));
    if (Q * D != P) throw std::logic_error("divide_exact: nonzero remainder");
    return Q;
}

}  // namespace gkq
