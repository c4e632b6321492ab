// Point-counting oracle for alpha(L, H_k), ranks 1 and 2.
//
// One hyperbolic plane contributes, for an n-tuple of vectors (x_i, y_i), the
// Gram data (x_i y_i ; x_i y_j + x_j y_i).  Its value distribution D on R^{n(n+1)/2},
// R = Z/p^N, convolved k times and read at the Gram entries of L is the count.
//
// D is invariant under (x, y) -> (u x, u^{-1} y) for units u, so the parallel
// kernel enumerates x up to unit scaling and weights each orbit by its size.

#include <omp.h>

#include <cmath>
#include <string>

#include "gkq/siegel.hpp"

namespace gkq {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct Ring {
    long p;
    int N;
    u64 M;
};

Ring make_ring(long p, int N) {
    u64 M = 1;
    for (int i = 0; i < N; ++i) M *= static_cast<u64>(p);
    return {p, N, M};
}

u64 mod_of(const BigInt& x, u64 M) {
    BigInt r = x % BigInt(static_cast<unsigned long>(M));
    if (r < 0) r += BigInt(static_cast<unsigned long>(M));
    return r.get_ui();
}

BigInt from_u128(u128 v) {
    BigInt hi(static_cast<unsigned long>(static_cast<u64>(v >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<u64>(v)));
    return (hi << 64) + lo;
}

// phi(p^e), with phi(p^0) = 1
u64 euler_pp(long p, int e) {
    if (e == 0) return 1;
    u64 r = static_cast<u64>(p - 1);
    for (int i = 1; i < e; ++i) r *= static_cast<u64>(p);
    return r;
}

struct XRep {
    u64 x1, x2, weight;
};

// Unit-scaling orbit representatives of R^dim (dim 1 or 2) with orbit sizes.
std::vector<XRep> orbit_reps(const Ring& R, int dim) {
    std::vector<XRep> reps;
    reps.push_back({0, 0, 1});
    u64 pv = 1;
    for (int v = 0; v < R.N; ++v, pv *= static_cast<u64>(R.p)) {
        u64 w = euler_pp(R.p, R.N - v);
        if (dim == 1) {
            reps.push_back({pv, 0, w});
            continue;
        }
        for (u64 x2 = 0; x2 < R.M; x2 += pv) reps.push_back({pv, x2, w});  // v(x1) = v minimal
        u64 step = pv * static_cast<u64>(R.p);
        for (u64 x1 = 0; x1 < R.M; x1 += step) reps.push_back({x1, pv, w});  // v(x1) > v = v(x2)
    }
    return reps;
}

u64 plane_cells(const Ring& R, int n) { return n == 1 ? R.M : R.M * R.M * R.M; }

std::vector<u64> plane_distribution(const Ring& R, int n, bool orbits) {
    const u64 M = R.M;
    std::vector<u64> D(plane_cells(R, n), 0);
    if (n == 1) {
        if (!orbits) {
            for (u64 x = 0; x < M; ++x)
                for (u64 y = 0; y < M; ++y) ++D[(x * y) % M];
            return D;
        }
        auto reps = orbit_reps(R, 1);
        const long nr = static_cast<long>(reps.size());
#pragma omp parallel for schedule(dynamic)
        for (long r = 0; r < nr; ++r) {
            const XRep& x = reps[static_cast<size_t>(r)];
            for (u64 y = 0; y < M; ++y) {
#pragma omp atomic
                D[(x.x1 * y) % M] += x.weight;
            }
        }
        return D;
    }
    auto cell = [M](u64 x1, u64 x2, u64 y1, u64 y2) {
        u64 t1 = (x1 * y1) % M, t2 = (x2 * y2) % M, t3 = (x1 * y2 + x2 * y1) % M;
        return (t1 * M + t2) * M + t3;
    };
    if (!orbits) {
        for (u64 x1 = 0; x1 < M; ++x1)
            for (u64 x2 = 0; x2 < M; ++x2)
                for (u64 y1 = 0; y1 < M; ++y1)
                    for (u64 y2 = 0; y2 < M; ++y2) ++D[cell(x1, x2, y1, y2)];
        return D;
    }
    auto reps = orbit_reps(R, 2);
    const long nr = static_cast<long>(reps.size());
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < nr; ++r) {
        const XRep& x = reps[static_cast<size_t>(r)];
        for (u64 y1 = 0; y1 < M; ++y1)
            for (u64 y2 = 0; y2 < M; ++y2) {
                u64 c = cell(x.x1, x.x2, y1, y2);
#pragma omp atomic
                D[c] += x.weight;
            }
    }
    return D;
}

// componentwise subtraction in R^cells coordinates
u64 cell_sub(const Ring& R, int n, u64 t, u64 w) {
    const u64 M = R.M;
    if (n == 1) return (t + M - w) % M;
    u64 t3 = t % M, t2 = (t / M) % M, t1 = t / (M * M);
    u64 w3 = w % M, w2 = (w / M) % M, w1 = w / (M * M);
    return (((t1 + M - w1) % M) * M + (t2 + M - w2) % M) * M + (t3 + M - w3) % M;
}

std::vector<u128> convolve(const Ring& R, int n, const std::vector<u128>& A, const std::vector<u64>& D) {
    const u64 cells = plane_cells(R, n);
    std::vector<u128> C(cells, 0);
    for (u64 t = 0; t < cells; ++t) {
        u128 s = 0;
        for (u64 w = 0; w < cells; ++w)
            if (D[w]) s += A[cell_sub(R, n, t, w)] * D[w];
        C[t] = s;
    }
    return C;
}

double log2_cost(const Ring& R, int n, int k, bool orbits) {
    double lm = std::log2(static_cast<double>(R.M));
    double cells = n == 1 ? lm : 3 * lm;
    // building D: every x (or orbit rep) times every y
    double build = orbits ? (n == 1 ? std::log2(R.N + 1.0) + lm : std::log2(3.0) + 3 * lm) : 2 * n * lm;
    double conv = k >= 3 ? 2 * cells + std::log2(k - 2.0) : 0;
    double point = cells;
    double mx = std::max({build, conv, point});
    return mx + 1;  // loose factor for the sum of the three
}

BigInt count_impl(const GramMatrix& L, int k, int N, u64 budget, bool orbits) {
    int n = L.n;
    if (n < 1 || n > 2) throw std::domain_error("density oracle: rank 1 or 2 only");
    if (k < n) throw std::domain_error("density oracle: need k >= n");
    if (N < 1) throw std::domain_error("density oracle: need N >= 1");
    Ring R = make_ring(L.p, N);
    if (std::log2(static_cast<double>(R.M)) * 2 * n * k >= 126)
        throw InfeasibleBudget("density oracle: counts would overflow 128 bits");
    if (log2_cost(R, n, k, orbits) > std::log2(static_cast<double>(budget)))
        throw InfeasibleBudget("density oracle: p=" + std::to_string(L.p) + " N=" + std::to_string(N) +
                               " k=" + std::to_string(k) + " exceeds the point budget of " + std::to_string(budget));
    std::vector<u64> D = plane_distribution(R, n, orbits);
    const u64 cells = plane_cells(R, n);
    u64 target;
    if (n == 1) {
        target = mod_of(L.G[0][0] / 2, R.M);
    } else {
        u64 t1 = mod_of(L.G[0][0] / 2, R.M), t2 = mod_of(L.G[1][1] / 2, R.M), t3 = mod_of(L.G[0][1], R.M);
        target = (t1 * R.M + t2) * R.M + t3;
    }
    if (k == 1) return BigInt(static_cast<unsigned long>(D[target]));
    if (k == 2) {
        u128 s = 0;
        for (u64 w = 0; w < cells; ++w)
            if (D[w]) s += static_cast<u128>(D[cell_sub(R, n, target, w)]) * D[w];
        return from_u128(s);
    }
    std::vector<u128> A(D.begin(), D.end());
    for (int i = 2; i < k; ++i) A = convolve(R, n, A, D);
    u128 s = 0;
    for (u64 w = 0; w < cells; ++w)
        if (D[w]) s += A[cell_sub(R, n, target, w)] * D[w];
    return from_u128(s);
}

Rat normalize(const BigInt& count, long p, int n, int k, int N) {
    return Rat(count) / Rat(ipow(p, static_cast<unsigned>(N * (2 * k * n - (n * n + n) / 2))));
}

}  // namespace

BigInt density_count_serial(const GramMatrix& L, int k, int N, std::uint64_t budget) {
    return count_impl(L, k, N, budget, false);
}

BigInt density_count_parallel(const GramMatrix& L, int k, int N, std::uint64_t budget) {
    return count_impl(L, k, N, budget, true);
}

DensityOracleResult density_oracle(const GramMatrix& L, int k, int N, std::uint64_t budget) {
    DensityOracleResult r;
    r.k = k;
    r.N = N;
    r.count = density_count_parallel(L, k, N, budget);
    r.density = normalize(r.count, L.p, L.n, k, N);
    if (N >= 2) {
        BigInt prev = density_count_parallel(L, k, N - 1, budget);
        r.stabilized = normalize(prev, L.p, L.n, k, N - 1) == r.density;
    }
    return r;
}

}  // namespace gkq
