#include "gkq/gkmult.hpp"

#include <algorithm>
#include <stdexcept>

#include "gkq/siegel.hpp"

namespace gkq {

namespace {

Rat fprime_at(const std::vector<int>& gk, long p, const Rat& x) {
    return poly_eval(poly_derivative(aniso_inductive_gk(gk, p)), x);
}

std::vector<int> sorted3(int a, int b, int c) {
    std::vector<int> v{a, b, c};
    std::sort(v.begin(), v.end());
    return v;
}

BigInt phi_pp(long p, int e) { return e == 0 ? BigInt(1) : ipow(p, e) - ipow(p, e - 1); }

}  // namespace

BigInt t_sum(int a1, int a2, long p) {
    if (a1 < 0 || a2 < 0) throw std::domain_error("t_sum: negative entry");
    BigInt s = 0;
    for (int x = 0; x <= a1; ++x)
        for (int y = 0; y <= a2; ++y) s += ipow(p, std::min(a1 - x + y, a2 - y + x));
    return s;
}

BigInt fprime_rank1_at1(int a, long p) {
    BigInt s = 0;
    for (int i = 0; i <= a; ++i) s += ipow(p, i);
    return -s;
}

bool is_aniso_rank3_gk(const std::vector<int>& a) {
    if (a.size() != 3 || a[0] < 0 || a[0] > a[1] || a[1] > a[2]) return false;
    int odd = (a[0] & 1) + (a[1] & 1) + (a[2] & 1);
    return odd == 1 || odd == 2;
}

Rat alpha_p_from_siegel(int a1, int a2, int a3, long p) {
    Rat fp = fprime_at({a1, a2, a3}, p, frac(1, p * p));
    return frac(-2 * p, (p - 1) * (p - 1)) * fp / alpha_OD(3, a1 + a2 + a3, p);
}

BigInt alpha_p(int a1, int a2, int a3, long p) {
    if (!is_aniso_rank3_gk({a1, a2, a3})) throw std::domain_error("alpha_p: not the GK of an anisotropic ternary lattice");
    if (a1 == 0 && a2 == 0 && a3 == 1) return 1;
    if (a1 == 0 && a2 == 1 && a3 == 1) return 2;
    if (a3 - 2 >= a2) return alpha_p(a1, a2, a3 - 2, p) + t_sum(a1, a2, p);
    Rat v = alpha_p_from_siegel(a1, a2, a3, p);
    if (v.get_den() != 1) throw std::logic_error("alpha_p: non-integral value");
    return v.get_num();
}

bool identity_t_sum(int a1, int a2, long p) {
    Rat rhs = frac(-1, p - 1) * fprime_at({a1, a2}, p, frac(1, p));
    return Rat(t_sum(a1, a2, p)) == rhs;
}

bool identity_alpha_p(int a1, int a2, int a3, long p) {
    Rat a = alpha_p(a1, a2, a3, p);  // validates the tuple
    return a == alpha_p_from_siegel(a1, a2, a3, p);
}

bool derivative_check_rank3(const std::vector<int>& gk, long p) {
    if (gk.size() != 3 || gk[2] < 2) return true;
    Rat x = frac(1, p * p);
    int t = gk[0] + gk[1] + gk[2];
    Rat lhs = fprime_at(gk, p, x) / alpha_OD(3, t, p);
    auto down = sorted3(gk[0], gk[1], gk[2] - 2);
    Rat rhs = fprime_at(down, p, x) / alpha_OD(3, t - 2, p) +
              frac(p - 1, 2 * p) * fprime_at({gk[0], gk[1]}, p, frac(1, p));
    return lhs == rhs;
}

bool derivative_check_rank2(const std::vector<int>& gk, long p) {
    if (gk.size() != 2 || gk[1] < 2) return true;
    std::vector<int> down{gk[0], gk[1] - 2};
    std::sort(down.begin(), down.end());
    Rat lhs = fprime_at(gk, p, frac(1, p));
    Rat rhs = p * fprime_at(down, p, frac(1, p)) + 2 * (p - 1) * fprime_at({gk[0]}, p, Rat(1));
    return lhs == rhs;
}

bool derivative_check_rank1(int a, long p) {
    Rat at1 = fprime_at({a}, p, Rat(1));
    if (at1 != Rat(fprime_rank1_at1(a, p))) return false;
    if (a < 2) return true;
    return at1 == p * p * fprime_at({a - 2}, p, Rat(1)) - (p + 1);
}

bool t_recursion_check(int a1, int a2, long p) {
    if (a2 < 2) return true;
    return t_sum(a1, a2, p) == p * t_sum(a1, a2 - 2, p) - 2 * fprime_rank1_at1(a1, p);
}

BigInt ordinary_multiplicity(long m1, long m2, long beta, long p) {
    BigInt d = 4 * BigInt(m1) * m2 - BigInt(beta) * beta;
    if (d <= 0) throw std::domain_error("ordinary_multiplicity: T must be positive definite");
    int v = valuation(d, p);
    if (v % 2) throw std::domain_error("ordinary_multiplicity: odd valuation of det(2T), not an ordinary point");
    return ipow(p, v / 2);
}

QuasiCanonicalResult quasicanonical_sum(int a1, int a2, int b1, int b2, long p, std::optional<int> r_in) {
    // exchanging f1, f2 swaps (a1, b1) <-> (a2, b2); dualizing swaps a <-> b
    int m = std::min({a1, a2, b1, b2});
    if (a1 != m) {
        if (a2 == m) {
            std::swap(a1, a2);
            std::swap(b1, b2);
        } else if (b1 == m) {
            std::swap(a1, b1);
            std::swap(a2, b2);
        } else {
            std::swap(a1, a2);
            std::swap(b1, b2);
            std::swap(a1, b1);
            std::swap(a2, b2);
        }
    }
    int r = r_in.value_or(std::min(a1 + b2, a2 + b1));
    QuasiCase which;
    if (b1 < b2)
        which = a2 + b1 <= a1 + b2 ? QuasiCase::One : QuasiCase::Two;
    else
        which = a2 + b1 <= a1 + b2 ? QuasiCase::Three : QuasiCase::Four;
    // weight of (s, s') per regime; the diagonal weight uses the free level
    auto weight = [&](int s, int sp) -> BigInt {
        switch (which) {
            case QuasiCase::One:
                if (s <= a1 && sp <= b1) return phi_pp(p, s) * phi_pp(p, sp);
                if (a1 < s && s <= a2 && sp == s + b1 - a1) return phi_pp(p, s) * ipow(p, b1);
                if (a2 < s && s <= r - b1 && sp == s + b1 - a1 && sp == s + b2 - a2) return phi_pp(p, s) * ipow(p, b1);
                return 0;
            case QuasiCase::Two:
                if (s <= a1 && sp <= b1) return phi_pp(p, s) * phi_pp(p, sp);
                if (a1 < s && s <= r - b1 && sp == s + b1 - a1) return phi_pp(p, s) * ipow(p, b1);
                return 0;
            case QuasiCase::Three:
                if (sp <= b2 && s <= a1) return phi_pp(p, s) * phi_pp(p, sp);
                if (b2 < sp && sp <= b1 && s == sp - b2 + a2) return phi_pp(p, sp) * ipow(p, a1);
                if (b1 < sp && sp <= r - a1 && s == sp - b1 + a1 && s == sp - b2 + a2)
                    return phi_pp(p, sp) * ipow(p, a1);
                return 0;
            case QuasiCase::Four:
                if (sp <= b2 && s <= a1) return phi_pp(p, s) * phi_pp(p, sp);
                if (b2 < sp && sp <= r - a1 && s == sp - b2 + a2) return phi_pp(p, sp) * ipow(p, a1);
                return 0;
        }
        return 0;
    };
    BigInt sum = 0;
    for (int s = 0; s <= r; ++s)
        for (int sp = 0; sp <= r; ++sp) sum += weight(s, sp);
    return {which, a1, a2, b1, b2, r, sum, ipow(p, r)};
}

bool quasicanonical_sum_check(int a1, int a2, int b1, int b2, long p) { return quasicanonical_sum(a1, a2, b1, b2, p).ok(); }

BigInt special_cycle_e(const std::vector<int>& gk, long p) {
    switch (gk.size()) {
        case 1:
            return alpha_p(0, 0, gk[0], p);
        case 2:
            return alpha_p(0, gk[0], gk[1], p);
        case 3:
            if (gk[0] != 0) throw std::domain_error("special_cycle_e: rank-3 tuple must start with 0");
            return alpha_p(0, gk[1], gk[2], p);
        case 4:
            if (gk[0] != 0) throw std::domain_error("special_cycle_e: rank-4 tuple must start with 0");
            return alpha_p(gk[1], gk[2], gk[3], p);
        default:
            throw std::domain_error("special_cycle_e: tuple length must be 1..4");
    }
}

bool special_cycle_check(const std::vector<int>& gk, long p) {
    if (gk.empty() || gk.size() > 4) throw std::domain_error("special_cycle_check: tuple length must be 1..4");
    std::vector<int> down = gk;
    down.back() -= 2;
    BigInt diff = special_cycle_e(gk, p) - special_cycle_e(down, p);
    size_t n = gk.size() - 1;
    std::vector<int> M;
    if (n == 3)
        M = {gk[1], gk[2]};
    else if (n >= 1)
        M = {0, gk[n - 1]};
    else
        M = {0, 0};
    Rat rhs = frac(-1, p - 1) * fprime_at(M, p, frac(1, p));
    return Rat(diff) == rhs;
}

}  // namespace gkq
