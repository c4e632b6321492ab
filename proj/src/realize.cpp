#include "gkq/realize.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "gkq/siegel.hpp"

namespace gkq {

long nonresidue(long p) {
    for (long u = 2; u < p; ++u)
        if (kronecker_symbol(u, p) == -1) return u;
    throw std::domain_error("nonresidue: p must be an odd prime");
}

namespace {

void for_tuples(int n, int max_entry, int max_total, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> a;
    std::function<void(int, int)> rec = [&](int lo, int left) {
        if (static_cast<int>(a.size()) == n) {
            f(a);
            return;
        }
        for (int v = lo; v <= max_entry && v <= left; ++v) {
            a.push_back(v);
            rec(v, left - v);
            a.pop_back();
        }
    };
    rec(0, max_total);
}

void add(AnisoCatalog& cat, const GramMatrix& B, int max_entry, int max_total) {
    if (!is_anisotropic(B)) return;
    GKInvariant g = certified_gk(B);
    if (g.total() > max_total || g.a.back() > max_entry) return;
    cat[g.a].push_back(B);
}

AnisoCatalog odd_catalog(long p, int n, int max_entry, int max_total) {
    AnisoCatalog cat;
    long d = nonresidue(p);
    for_tuples(n, max_entry, max_total, [&](const std::vector<int>& a) {
        for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
            std::vector<BigInt> e;
            for (int i = 0; i < n; ++i) {
                long u = (i > 0 && (mask >> (i - 1)) & 1) ? d : 1;
                e.push_back(u * ipow(p, static_cast<unsigned>(a[i])));
            }
            GramMatrix B = diagonal_gram(p, e);
            if (is_anisotropic(B)) {
                cat[a].push_back(B);
                return;
            }
        }
    });
    return cat;
}

GramMatrix a_block(int i) {
    BigInt s = ipow(2, static_cast<unsigned>(i));
    return make_gram(2, {{2 * s, s}, {s, 2 * s}});
}

GramMatrix unary(long u, int e) { return diagonal_gram(2, {u * ipow(2, static_cast<unsigned>(e))}); }

AnisoCatalog z2_catalog(int n, int max_entry, int max_total) {
    AnisoCatalog cat;
    const long units[] = {1, 3, 5, 7};
    // unary pieces (u, e), sorted so that each multiset is generated once
    std::vector<std::pair<int, long>> un;
    for (int e = 0; e <= max_entry; ++e)
        for (long u : units) un.emplace_back(e, u);
    auto sum_of = [](const std::vector<GramMatrix>& parts) {
        GramMatrix r = parts[0];
        for (size_t i = 1; i < parts.size(); ++i) r = orthogonal_sum(r, parts[i]);
        return r;
    };
    // k unary entries with nondecreasing (e, u) index and exponent sum <= cap
    std::function<void(int, size_t, int, std::vector<GramMatrix>&, const std::function<void(std::vector<GramMatrix>&)>&)>
        unaries = [&](int k, size_t start, int cap, std::vector<GramMatrix>& acc,
                      const std::function<void(std::vector<GramMatrix>&)>& done) {
            if (k == 0) {
                done(acc);
                return;
            }
            for (size_t i = start; i < un.size(); ++i) {
                if (un[i].first > cap) break;
                acc.push_back(unary(un[i].second, un[i].first));
                unaries(k - 1, i, cap - un[i].first, acc, done);
                acc.pop_back();
            }
        };
    auto consider = [&](std::vector<GramMatrix>& parts) { add(cat, sum_of(parts), max_entry, max_total); };
    std::vector<GramMatrix> acc;
    if (n <= 3) {
        unaries(n, 0, max_total, acc, consider);
        if (n >= 2)
            for (int i = 0; 2 * i <= max_total && i <= max_entry; ++i) {
                acc = {a_block(i)};
                unaries(n - 2, 0, max_total - 2 * i, acc, consider);
            }
        return cat;
    }
    if (n != 4) throw std::domain_error("anisotropic_catalog: rank must be 1..4");
    // Case I
    for (int i = 0; i <= max_entry; ++i)
        for (int j = i; j <= max_entry && 2 * (i + j) <= max_total; ++j)
            add(cat, orthogonal_sum(a_block(i), a_block(j)), max_entry, max_total);
    // Case II
    for (int i = 0; i <= max_entry; ++i)
        for (int m1 = 0; m1 <= max_entry; ++m1)
            for (int m2 = m1; m2 <= max_entry && 2 * i + m1 + m2 + 2 <= max_total; ++m2)
                for (long u1 : units)
                    for (long u2 : units)
                        add(cat, sum_of({a_block(i), unary(u1, m1), unary(u2, m2)}), max_entry, max_total);
    // Case III: nondecreasing exponents with mu1 < mu3, mu2 < mu4; GK adds at least 4
    for (int m1 = 0; m1 <= max_entry; ++m1)
        for (int m2 = m1; m2 <= max_entry; ++m2)
            for (int m3 = std::max(m2, m1 + 1); m3 <= max_entry; ++m3)
                for (int m4 = std::max(m3, m2 + 1); m4 <= max_entry && m1 + m2 + m3 + m4 + 4 <= max_total; ++m4)
                    for (long u1 : units)
                        for (long u2 : units)
                            for (long u3 : units)
                                for (long u4 : units)
                                    add(cat, sum_of({unary(u1, m1), unary(u2, m2), unary(u3, m3), unary(u4, m4)}),
                                        max_entry, max_total);
    return cat;
}

}  // namespace

AnisoCatalog anisotropic_catalog(long p, int n, int max_entry, int max_total) {
    if (n < 1 || n > 4) throw std::domain_error("anisotropic_catalog: rank must be 1..4");
    return p == 2 ? z2_catalog(n, max_entry, max_total) : odd_catalog(p, n, max_entry, max_total);
}

}  // namespace gkq
