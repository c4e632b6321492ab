#include "gkq/siegel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gkq {

namespace {

// prod_{1 <= i < n - a/2} (1 - p^{2i} X^2), i.e. i < (2n - a)/2
UniPoly chi_product(int n, int a, long p) {
    UniPoly r = UniPoly::constant(1);
    for (int i = 1; 2 * i < 2 * n - a; ++i) r *= UniPoly::one_plus(-ipow(p, 2 * i), 2);
    return r;
}

UniPoly one_minus_x() { return UniPoly::one_plus(-1, 1); }

std::pair<int, int> canonical_key(const ResidueType& r) {
    if (r.a % 2 == 1) return {r.a, 0};
    if (r.a == 0) return {0, 1};
    return {r.a, r.chi};
}

std::vector<int> sorted_tuple(std::vector<int> a) {
    std::sort(a.begin(), a.end());
    return a;
}

}  // namespace

SCountTable s_counts(const GramMatrix& L) {
    SCountTable t;
    for (const Overlattice& o : integral_overlattices(L)) {
        auto [a, chi] = canonical_key(residue_type(o.gram));
        t[{a, chi, o.index_b}] += 1;
    }
    return t;
}

BigInt prim_count(int a, int chi, int n, int k, long p) {
    if (k < n || a < 0 || a > n) throw std::domain_error("prim_count: need k >= n and 0 <= a <= n");
    Rat v = rpow(p, 2 * k * n - (n * n + n) / 2) * (1 - rpow(p, -k));
    if (chi != 0) {
        if (a % 2) throw std::domain_error("prim_count: odd a carries no chi");
        v *= 1 + chi * rpow(p, n - a / 2 - k);
    }
    for (int i = 1; 2 * i < 2 * n - a; ++i) v *= 1 - rpow(p, 2 * i - 2 * k);
    if (v.get_den() != 1 || v < 0) throw std::logic_error("prim_count: non-integral count " + to_string(v));
    return v.get_num();
}

UniPoly siegel_from_counts(const SCountTable& counts, int n, long p) {
    UniPoly sum;
    for (const auto& [key, c] : counts) {
        auto [a, chi, b] = key;
        UniPoly term = UniPoly::constant(c * ipow(p, static_cast<unsigned>(b * (n + 1)))).shift_degree(2 * b);
        if (chi != 0) term *= UniPoly::one_plus(chi * ipow(p, static_cast<unsigned>(n - a / 2)), 1);
        term *= chi_product(n, a, p);
        sum += term;
    }
    return one_minus_x() * sum;
}

UniPoly siegel_series(const GramMatrix& L) { return siegel_from_counts(s_counts(L), L.n, L.p); }

UniPoly maximal_closed_form(const std::vector<int>& gk, long p) {
    auto lin = [&](long sign, unsigned e) { return UniPoly::one_plus(sign * ipow(p, e), 1); };
    auto quad = [&](unsigned e) { return UniPoly::one_plus(-ipow(p, e), 2); };
    UniPoly f = one_minus_x();
    using V = std::vector<int>;
    if (gk == V{0}) return f;
    if (gk == V{1}) return f * lin(1, 1);
    if (gk == V{0, 0}) return f * lin(-1, 1);
    if (gk == V{1, 1}) return f * lin(1, 2) * quad(2);
    if (gk == V{0, 1}) return f * quad(2);
    if (gk == V{0, 0, 1}) return f * quad(2) * lin(-1, 2);
    if (gk == V{0, 1, 1}) return f * quad(2) * quad(4);
    if (gk == V{0, 0, 1, 1}) return f * lin(-1, 3) * quad(2) * quad(4);
    throw std::domain_error("maximal_closed_form: no closed form for this GK");
}

bool density_decomposition_check(const GramMatrix& L, int k) {
    long p = L.p;
    int n = L.n;
    Rat lhs = poly_eval(siegel_series(L), rpow(p, -k));
    Rat rhs = 0;
    Rat norm = rpow(p, -(2 * k * n - (n * n + n) / 2));
    for (const Overlattice& o : integral_overlattices(L)) {
        auto [a, chi] = canonical_key(residue_type(o.gram));
        rhs += rpow(p, o.index_b * (n + 1 - 2 * k)) * norm * Rat(prim_count(a, chi, n, k, p));
    }
    return lhs == rhs;
}

std::vector<GramMatrix> intermediate_lattices(const GramMatrix& L, int d, int m) {
    long p = L.p;
    int n = L.n;
    int l = n - d;
    std::vector<GramMatrix> out;
    // reduced row echelon subspaces of F_p^d with pivot set of size m
    std::vector<int> piv(static_cast<size_t>(m));
    auto rec_pivots = [&](auto&& self, int idx, int start) -> void {
        if (idx == m) {
            // free entries: row r, column c > piv[r], c not a pivot
            std::vector<std::pair<int, int>> free;
            for (int r = 0; r < m; ++r)
                for (int c = piv[r] + 1; c < d; ++c)
                    if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
            std::vector<long> val(free.size(), 0);
            while (true) {
                RMat U(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
                for (int i = 0; i < l; ++i) U[i][i] = 1;
                int col = l;
                for (int r = 0; r < m; ++r, ++col) {
                    U[l + piv[r]][col] = frac(1, p);
                    for (size_t f = 0; f < free.size(); ++f)
                        if (free[f].first == r) U[l + free[f].second][col] = frac(val[f], p);
                }
                for (int c = 0; c < d; ++c)
                    if (std::find(piv.begin(), piv.end(), c) == piv.end()) U[l + c][col++] = 1;
                auto g = transform_rational(L, U);
                if (!g) throw std::domain_error("intermediate_lattices: L^{(d,n)} is not integral");
                out.push_back(*g);
                size_t f = 0;
                for (; f < val.size(); ++f) {
                    if (++val[f] < p) break;
                    val[f] = 0;
                }
                if (f == val.size()) break;
            }
            return;
        }
        for (int c = start; c < d; ++c) {
            piv[idx] = c;
            self(self, idx + 1, c + 1);
        }
    };
    rec_pivots(rec_pivots, 0, 0);
    return out;
}

UniPoly inductive_rhs(const GramMatrix& L0in, int d) {
    if (L0in.p == 2) throw std::domain_error("inductive_rhs: only odd p (the p = 2 case rests on an open conjecture)");
    GramMatrix L = odd_diagonal_form(L0in);
    long p = L.p;
    int n = L.n;
    if (d < 1 || d > n) throw std::domain_error("inductive_rhs: bad d");
    int top = L.ord_diag(n - 1);
    int mult = 0;
    for (int i = 0; i < n; ++i)
        if (L.ord_diag(i) == top) ++mult;
    if (mult != d) throw std::domain_error("inductive_rhs: d must be the multiplicity of the top GK entry");
    // q(e/p) = q(e)/p^2, so L^{(d,n)} is integral only from valuation 2 on
    if (top < 2) throw std::domain_error("inductive_rhs: L^{(d,n)} is not integral (top GK entry < 2)");

    UniPoly rhs;
    for (int m = 1; m <= d; ++m) {
        auto lats = intermediate_lattices(L, d, m);
        if (BigInt(static_cast<long>(lats.size())) != q_binomial(d, m, p))
            throw std::logic_error("inductive_rhs: Grassmannian count mismatch");
        UniPoly s;
        for (const auto& g : lats) s += siegel_series(g);
        BigInt c = ipow(p, static_cast<unsigned>(m * (m - 1) / 2));
        if (m % 2 == 0) c = -c;
        rhs += (s * (c * ipow(p, static_cast<unsigned>((n + 1) * m)))).shift_degree(2 * m);
    }
    UniPoly prod = UniPoly::constant(1);
    for (int i = 1; i <= d; ++i) prod *= UniPoly::one_plus(-ipow(p, 2 * i), 2);
    UniPoly tail = one_minus_x() * divide_exact(prod, UniPoly::one_plus(-ipow(p, d), 1));
    if (n > d) {
        Mat G0(static_cast<size_t>(n - d), std::vector<BigInt>(static_cast<size_t>(n - d)));
        for (int i = 0; i < n - d; ++i)
            for (int j = 0; j < n - d; ++j) G0[i][j] = L.G[i][j];
        tail *= siegel_series(make_gram(p, G0)).scale_var(ipow(p, d));
    }
    return rhs + tail;
}

GKInvariant certified_gk(const GramMatrix& L) {
    // classified anisotropic Z_2 shapes first: the general search is slow at rank 4
    if (auto c = z2_shape_case(L); c && is_anisotropic(L)) return gk_anisotropic_z2(L, *c);
    GKInvariant g = gk_invariant(L);
    if (g.certainty == Certainty::Certified) return g;
    throw std::domain_error("certified_gk: no certified GK path for this lattice");
}

UniPoly aniso_inductive_gk(const std::vector<int>& gk_in, long p) {
    std::vector<int> gk = sorted_tuple(gk_in);
    int n = static_cast<int>(gk.size());
    if (n < 1 || n > 4) throw std::domain_error("aniso_inductive: rank must be 1..4");
    if (gk.back() <= 1) return maximal_closed_form(gk, p);
    std::vector<int> head(gk.begin(), gk.end() - 1);
    std::vector<int> down = head;
    down.push_back(gk.back() - 2);
    UniPoly first = (aniso_inductive_gk(down, p) * ipow(p, static_cast<unsigned>(n + 1))).shift_degree(2);
    UniPoly f1 = one_minus_x() * UniPoly::one_plus(p, 1);
    if (n == 1) return first + f1;
    return first + f1 * aniso_inductive_gk(head, p).scale_var(p);
}

UniPoly aniso_inductive(const GramMatrix& L) {
    if (!is_anisotropic(L)) throw std::domain_error("aniso_inductive: lattice is isotropic");
    if (L.p == 2) return aniso_inductive_gk(certified_gk(L).a, 2);
    // odd p: recurse on actual lattices in a diagonal basis
    GramMatrix D = odd_diagonal_form(L);
    long p = D.p;
    int n = D.n;
    int top = D.ord_diag(n - 1);
    if (top <= 1) return maximal_closed_form(gk_invariant(D).a, p);
    std::vector<BigInt> entries;
    for (int i = 0; i < n; ++i) entries.push_back(D.G[i][i] / 2);
    std::vector<BigInt> down = entries;
    down.back() /= p * p;
    UniPoly first = (aniso_inductive(diagonal_gram(p, down)) * ipow(p, static_cast<unsigned>(n + 1))).shift_degree(2);
    UniPoly f1 = one_minus_x() * UniPoly::one_plus(p, 1);
    if (n == 1) return first + f1;
    entries.pop_back();
    return first + f1 * aniso_inductive(diagonal_gram(p, entries)).scale_var(p);
}

bool functional_equation_check_gk(const std::vector<int>& gk, long p) {
    if (gk.size() != 2) throw std::domain_error("functional_equation_check: rank 2 only");
    UniPoly F = aniso_inductive_gk(gk, p);
    Rat lhs = poly_eval(poly_derivative(F), frac(1, p));
    Rat f = poly_eval(F, frac(1, p * p));
    int g = gk[0] + gk[1];
    Rat rhs;
    if (g % 2 == 0)
        rhs = -rpow(p, 3 + g / 2) / Rat((p - 1) * (p + 1)) * f;
    else
        rhs = -2 * rpow(p, 4 + (g - 1) / 2) / Rat((p - 1) * (p + 1) * (p + 1)) * f;
    return lhs == rhs;
}

bool functional_equation_check(const GramMatrix& L) {
    if (L.n != 2 || !is_anisotropic(L)) throw std::domain_error("functional_equation_check: needs anisotropic rank 2");
    long p = L.p;
    UniPoly F = siegel_series(L);
    if (F != aniso_inductive_gk(certified_gk(L).a, p)) return false;
    return functional_equation_check_gk(certified_gk(L).a, p);
}

Rat alpha_OD(int rank, int gk_total, long p) {
    switch (rank) {
        case 2: {
            if (p == 2) throw std::domain_error("alpha_OD: rank 2 needs odd p");
            Rat q = 1 + frac(1, p);
            if (gk_total % 2 == 0) return rpow(p, -gk_total / 2) * 2 * q;
            return rpow(p, -(gk_total - 1) / 2) * q * q;
        }
        case 3:
            return frac(2 * (p + 1) * (p + 1), p);
        case 4: {
            if (gk_total < 2 || gk_total % 2) throw std::domain_error("alpha_OD: rank 4 needs even |GK| >= 2");
            Rat t = 2 * (p + 1);
            return rpow(p, (gk_total - 2) / 2) * rpow(p, 1) * t * t;
        }
        default:
            throw std::domain_error("alpha_OD: rank must be 2, 3 or 4");
    }
}

}  // namespace gkq
