#include "gkq/eisenstein.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace gkq {

namespace {

// weight of the reduced form (a, b, c)
Rat form_weight(long a, long b, long c) {
    if (a == b && b == c) return frac(1, 3);
    if (b == 0 && a == c) return frac(1, 2);
    return 1;
}

bool reduced(long a, long b, long c) {
    if (std::labs(b) > a || a > c) return false;
    if ((std::labs(b) == a || a == c) && b < 0) return false;
    return true;
}

}  // namespace

Rat hurwitz(long N) {
    if (N < 0) throw std::domain_error("hurwitz: negative argument");
    if (N == 0) return frac(-1, 12);
    if (N % 4 == 1 || N % 4 == 2) return 0;
    static std::mutex mu;
    static std::map<long, Rat> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        if (auto it = cache.find(N); it != cache.end()) return it->second;
    }
    Rat h = 0;
    // 3a^2 <= 4ac - b^2 = N for reduced forms
    for (long a = 1; 3 * a * a <= N; ++a)
        for (long b = -a; b <= a; ++b) {
            long num = b * b + N;
            if (num % (4 * a)) continue;
            long c = num / (4 * a);
            if (reduced(a, b, c)) h += form_weight(a, b, c);
        }
    std::lock_guard<std::mutex> lk(mu);
    cache[N] = h;
    return h;
}

Rat hurwitz_by_b(long N) {
    if (N < 0) throw std::domain_error("hurwitz: negative argument");
    if (N == 0) return frac(-1, 12);
    Rat h = 0;
    for (long b = 0; 3 * b * b <= N; ++b) {
        long num = b * b + N;
        if (num % 4) continue;
        long ac = num / 4;
        for (long a = std::max(b, 1L); a * a <= ac; ++a) {
            if (ac % a) continue;
            long c = ac / a;
            if (reduced(a, b, c)) h += form_weight(a, b, c);
            if (b > 0 && reduced(a, -b, c)) h += form_weight(a, -b, c);
        }
    }
    return h;
}

Rat c_over_288(const BinaryT& T, HurwitzConvention conv) {
    BigInt d2 = T.det2();
    if (d2 <= 0) throw std::domain_error("c_over_288: T must be positive definite");
    long cont = conv == HurwitzConvention::ContT ? std::gcd(std::gcd(T.m1, T.m2), std::labs(T.beta))
                                                 : std::gcd(std::gcd(2 * T.m1, 2 * T.m2), std::labs(T.beta));
    long D = d2.get_si();
    Rat s = 0;
    for (long d = 1; d <= cont; ++d)
        if (cont % d == 0 && D % (d * d) == 0) s += d * hurwitz(D / (d * d));
    return s;
}

int chi_T(const BinaryT& T, long p) {
    BigInt D = fundamental_discriminant(-T.det2());
    return kronecker_symbol(D, p);
}

Rat eisenstein_sum(long m1, long m2, long p, ChiFilter filter, HurwitzConvention conv) {
    if (is_square(BigInt(m1) * m2))
        throw std::domain_error("eisenstein_sum: m1*m2 is a square, the correspondences do not meet properly");
    Rat s = 0;
    long bmax = 0;
    while ((bmax + 1) * (bmax + 1) < 4 * m1 * m2) ++bmax;
    for (long beta = -bmax; beta <= bmax; ++beta) {
        BinaryT T{m1, m2, beta};
        if (filter != ChiFilter::All) {
            bool split = chi_T(T, p) == 1;
            if (split != (filter == ChiFilter::Split)) continue;
        }
        s += c_over_288(T, conv);
    }
    return s;
}

BigInt d_one_m(long m) {
    if (m < 1) throw std::domain_error("d_one_m: m must be positive");
    BigInt s = 0;
    for (long d = 1; d <= m; ++d)
        if (m % d == 0) s += std::max(d, m / d);
    return s;
}

BigInt d_one_m_primitive(long m) {
    if (m < 1) throw std::domain_error("d_one_m_primitive: m must be positive");
    if (is_square(BigInt(m))) throw std::domain_error("d_one_m_primitive: m is a square");
    BigInt s = 0;
    for (long n = 1; n * n <= m; ++n) {
        if (m % (n * n)) continue;
        // mu(n)
        int mu = 1;
        long r = n;
        for (long q = 2; q <= r; ++q)
            if (r % q == 0) {
                r /= q;
                if (r % q == 0) mu = 0;
                mu = -mu;
            }
        s += mu * d_one_m(m / (n * n));
    }
    return s;
}

}  // namespace gkq
