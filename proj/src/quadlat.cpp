#include "gkq/quadlat.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gkq {

namespace {

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

long mod_floor(const BigInt& x, long m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return r.get_si();
}

// 2 * ord(x) compared against a sum without overflow on kInfVal
bool twice_ge(int ord, int sum) { return ord == kInfVal || 2L * ord >= sum; }
bool twice_gt(int ord, int sum) { return ord == kInfVal || 2L * ord > sum; }

RMat half_matrix(const GramMatrix& B) {
    RMat b(static_cast<size_t>(B.n), std::vector<Rat>(static_cast<size_t>(B.n)));
    for (int i = 0; i < B.n; ++i)
        for (int j = 0; j < B.n; ++j) b[i][j] = frac(B.G[i][j], 2);
    return b;
}

}  // namespace

int GramMatrix::ord_diag(int i) const { return valuation(frac(G[i][i], 2), p); }
int GramMatrix::ord_off(int i, int j) const { return valuation(G[i][j], p); }

GramMatrix make_gram(long p, const Mat& G) {
    if (!is_prime(p)) throw std::domain_error("make_gram: p must be prime");
    int n = static_cast<int>(G.size());
    if (n == 0) throw std::domain_error("make_gram: empty matrix");
    for (const auto& row : G)
        if (static_cast<int>(row.size()) != n) throw std::domain_error("make_gram: not square");
    for (int i = 0; i < n; ++i) {
        if (G[i][i] % 2 != 0) throw std::domain_error("make_gram: odd diagonal entry in 2B");
        for (int j = 0; j < n; ++j)
            if (G[i][j] != G[j][i]) throw std::domain_error("make_gram: not symmetric");
    }
    if (det(G) == 0) throw std::domain_error("make_gram: degenerate form");
    return GramMatrix{p, n, G};
}

GramMatrix diagonal_gram(long p, const std::vector<BigInt>& b) {
    int n = static_cast<int>(b.size());
    Mat G(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n), BigInt(0)));
    for (int i = 0; i < n; ++i) G[i][i] = 2 * b[i];
    return make_gram(p, G);
}

GramMatrix orthogonal_sum(const GramMatrix& A, const GramMatrix& B) {
    if (A.p != B.p) throw std::domain_error("orthogonal_sum: different primes");
    int n = A.n + B.n;
    Mat G(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n), BigInt(0)));
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j) G[i][j] = A.G[i][j];
    for (int i = 0; i < B.n; ++i)
        for (int j = 0; j < B.n; ++j) G[A.n + i][A.n + j] = B.G[i][j];
    return make_gram(A.p, G);
}

std::string to_json(const GramMatrix& B) {
    nlohmann::json j;
    j["p"] = B.p;
    j["n"] = B.n;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : B.G) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : r) row.push_back(x.get_si());
        rows.push_back(row);
    }
    j["gram2"] = rows;
    return j.dump();
}

GramMatrix gram_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    long p = j.at("p").get<long>();
    Mat G;
    for (const auto& row : j.at("gram2")) {
        std::vector<BigInt> r;
        for (const auto& x : row) {
            if (x.is_string())
                r.emplace_back(x.get<std::string>());
            else
                r.emplace_back(x.get<long>());
        }
        G.push_back(std::move(r));
    }
    if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(G.size()))
        throw std::domain_error("gram_from_json: n does not match gram2");
    return make_gram(p, G);
}

BigInt det(const Mat& M) {
    // Bareiss fraction-free elimination
    int n = static_cast<int>(M.size());
    Mat A = M;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (A[k][k] == 0) {
            int r = k + 1;
            while (r < n && A[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(A[k], A[r]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
        prev = A[k][k];
    }
    return sign * A[n - 1][n - 1];
}

Rat det(const RMat& M) {
    int n = static_cast<int>(M.size());
    RMat A = M;
    Rat d = 1;
    for (int k = 0; k < n; ++k) {
        int r = k;
        while (r < n && A[r][k] == 0) ++r;
        if (r == n) return 0;
        if (r != k) {
            std::swap(A[k], A[r]);
            d = -d;
        }
        d *= A[k][k];
        for (int i = k + 1; i < n; ++i) {
            Rat f = A[i][k] / A[k][k];
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
        }
    }
    return d;
}

Mat identity_mat(int n) {
    Mat I(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n), BigInt(0)));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

RMat to_rat(const Mat& M) {
    RMat R;
    for (const auto& row : M) {
        std::vector<Rat> r;
        for (const auto& x : row) r.emplace_back(x);
        R.push_back(std::move(r));
    }
    return R;
}

RMat inverse(const RMat& M) {
    int n = static_cast<int>(M.size());
    RMat A = M, I = to_rat(identity_mat(n));
    for (int k = 0; k < n; ++k) {
        int r = k;
        while (r < n && A[r][k] == 0) ++r;
        if (r == n) throw std::domain_error("inverse: singular matrix");
        std::swap(A[k], A[r]);
        std::swap(I[k], I[r]);
        Rat piv = A[k][k];
        for (int j = 0; j < n; ++j) {
            A[k][j] /= piv;
            I[k][j] /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k || A[i][k] == 0) continue;
            Rat f = A[i][k];
            for (int j = 0; j < n; ++j) {
                A[i][j] -= f * A[k][j];
                I[i][j] -= f * I[k][j];
            }
        }
    }
    return I;
}

RMat mul(const RMat& A, const RMat& B) {
    size_t n = A.size(), m = B[0].size(), k = B.size();
    RMat C(n, std::vector<Rat>(m, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (A[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

RMat transpose(const RMat& A) {
    RMat T(A[0].size(), std::vector<Rat>(A.size()));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
    return T;
}

int GKInvariant::total() const { return std::accumulate(a.begin(), a.end(), 0); }

std::string to_string(const GKInvariant& g) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < g.a.size(); ++i) os << (i ? "," : "") << g.a[i];
    os << ") " << (g.certainty == Certainty::Certified ? "certified" : "lower-bound");
    return os.str();
}

bool lex_less(const std::vector<int>& x, const std::vector<int>& y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

GramMatrix transform(const GramMatrix& B, const Mat& U) {
    if (static_cast<int>(U.size()) != B.n) throw std::domain_error("transform: size mismatch");
    if (valuation(det(U), B.p) != 0) throw std::domain_error("transform: U is not unimodular over Z_p");
    int n = B.n;
    Mat R(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n), BigInt(0)));
    Mat GU(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n), BigInt(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) GU[i][j] += B.G[i][k] * U[k][j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) R[i][j] += U[k][i] * GU[k][j];
    return GramMatrix{B.p, n, R};
}

std::optional<GramMatrix> transform_rational(const GramMatrix& B, const RMat& U) {
    RMat R = mul(transpose(U), mul(to_rat(B.G), U));
    Mat G(R.size(), std::vector<BigInt>(R.size()));
    for (size_t i = 0; i < R.size(); ++i)
        for (size_t j = 0; j < R.size(); ++j) {
            if (R[i][j].get_den() != 1) return std::nullopt;
            G[i][j] = R[i][j].get_num();
        }
    for (size_t i = 0; i < R.size(); ++i)
        if (G[i][i] % 2 != 0) return std::nullopt;
    return GramMatrix{B.p, static_cast<int>(R.size()), G};
}

bool in_S(const GramMatrix& B, const std::vector<int>& a) {
    if (static_cast<int>(a.size()) != B.n) return false;
    for (int i = 0; i < B.n; ++i) {
        if (a[i] < 0 || (i > 0 && a[i] < a[i - 1])) return false;
        int od = B.ord_diag(i);
        if (od != kInfVal && od < a[i]) return false;
        for (int j = i + 1; j < B.n; ++j)
            if (!twice_ge(B.ord_off(i, j), a[i] + a[j])) return false;
    }
    return true;
}

GKInvariant best_sequence_in_S(const GramMatrix& B) {
    int n = B.n;
    int cap = 0;
    for (int i = 0; i < n; ++i) {
        int od = B.ord_diag(i);
        if (od != kInfVal) cap = std::max(cap, od);
        for (int j = i + 1; j < n; ++j) {
            int oo = B.ord_off(i, j);
            if (oo != kInfVal) cap = std::max(cap, 2 * oo);
        }
    }
    std::vector<int> a;
    for (int k = 0; k < n; ++k) {
        int lo = k ? a.back() : 0;
        int chosen = lo;
        for (int v = cap; v >= lo; --v) {
            std::vector<int> trial = a;
            trial.resize(static_cast<size_t>(n), v);
            if (in_S(B, trial)) {
                chosen = v;
                break;
            }
        }
        a.push_back(chosen);
    }
    return GKInvariant{a, Certainty::LowerBound};
}

GramMatrix odd_diagonal_form(const GramMatrix& B) {
    if (B.p == 2) throw std::domain_error("odd_diagonal_form: p must be odd");
    long p = B.p;
    int n = B.n;
    RMat b = half_matrix(B);
    auto add_to = [&](int i, int j, const Rat& c) {  // e_i += c e_j
        for (int k = 0; k < n; ++k) b[i][k] += c * b[j][k];
        for (int k = 0; k < n; ++k) b[k][i] += c * b[k][j];
    };
    auto swap_basis = [&](int i, int j) {
        std::swap(b[i], b[j]);
        for (int k = 0; k < n; ++k) std::swap(b[k][i], b[k][j]);
    };
    for (int k = 0; k < n; ++k) {
        int best = kInfVal, bi = -1, bj = -1;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) {
                int v = valuation(b[i][j], p);
                if (v < best || (v == best && i == j && bi != bj)) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best == kInfVal) throw std::domain_error("odd_diagonal_form: degenerate");
        if (bi != bj) add_to(bi, bj, Rat(1));  // ord(b_ii + 2b_ij + b_jj) = ord(b_ij) for p odd
        swap_basis(k, bi);
        for (int j = k + 1; j < n; ++j)
            if (b[k][j] != 0) add_to(j, k, -b[k][j] / b[k][k]);
    }
    std::vector<std::pair<int, BigInt>> diag;
    for (int i = 0; i < n; ++i) {
        int v = valuation(b[i][i], p);
        Rat u = b[i][i] / rpow(p, v);
        BigInt num = u.get_num(), den = u.get_den(), inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), BigInt(p).get_mpz_t());
        BigInt rep = (num * inv) % p;
        if (rep < 0) rep += p;
        diag.emplace_back(v, rep);
    }
    std::stable_sort(diag.begin(), diag.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<BigInt> entries;
    for (const auto& [v, u] : diag) entries.push_back(u * ipow(p, static_cast<unsigned>(v)));
    return diagonal_gram(p, entries);
}

bool is_admissible_involution(const std::vector<int>& a, const std::vector<int>& sigma) {
    int n = static_cast<int>(a.size());
    if (static_cast<int>(sigma.size()) != n) return false;
    for (int i = 0; i < n; ++i) {
        if (sigma[i] < 0 || sigma[i] >= n || sigma[sigma[i]] != i) return false;
        if (i > 0 && a[i] < a[i - 1]) return false;
    }
    std::vector<int> P0, Pp, Pm;
    for (int i = 0; i < n; ++i) {
        if (sigma[i] == i)
            P0.push_back(i);
        else if (a[i] > a[sigma[i]])
            Pp.push_back(i);
        else if (a[i] < a[sigma[i]])
            Pm.push_back(i);
    }
    auto in = [](const std::vector<int>& s, int i) { return std::find(s.begin(), s.end(), i) != s.end(); };
    // (1)
    if (P0.size() > 2) return false;
    if (P0.size() == 2 && (a[P0[0]] - a[P0[1]]) % 2 == 0) return false;
    for (int i : P0) {
        int mx = -1;
        for (int j = 0; j < n; ++j)
            if ((in(P0, j) || in(Pp, j)) && (a[j] - a[i]) % 2 == 0) mx = std::max(mx, a[j]);
        if (a[i] != mx) return false;
    }
    // (2)
    for (int s = 0; s < n;) {
        int e = s;
        while (e < n && a[e] == a[s]) ++e;
        int plus = 0, minus_or_fixed = 0;
        for (int i = s; i < e; ++i) {
            if (in(Pp, i)) ++plus;
            if (in(Pm, i) || in(P0, i)) ++minus_or_fixed;
        }
        if (plus > 1 || minus_or_fixed > 1) return false;
        s = e;
    }
    // (3)
    for (int i : Pm) {
        int mn = INT_MAX;
        for (int j : Pp)
            if (a[j] > a[i] && (a[j] - a[i]) % 2 == 0) mn = std::min(mn, a[j]);
        if (a[sigma[i]] != mn) return false;
    }
    for (int i : Pp) {
        int mx = INT_MIN;
        for (int j : Pm)
            if (a[j] < a[i] && (a[i] - a[j]) % 2 == 0) mx = std::max(mx, a[j]);
        if (a[sigma[i]] != mx) return false;
    }
    return true;
}

bool is_reduced_form(const GramMatrix& B, const std::vector<int>& a, const std::vector<int>& sigma) {
    if (!in_S(B, a) || !is_admissible_involution(a, sigma)) return false;
    int n = B.n;
    for (int i = 0; i < n; ++i) {
        int j = sigma[i];
        if (j == i) {
            if (B.ord_diag(i) != a[i]) return false;
            continue;
        }
        if (a[i] <= a[j]) {
            if (B.p == 2) {
                if (2L * B.ord_off(i, j) != a[i] + a[j]) return false;
                if (a[i] < a[j] && B.ord_diag(i) != a[i]) return false;
            } else {
                int lo = std::min(i, j), hi = std::max(i, j);
                Mat G2 = {{B.G[lo][lo], B.G[lo][hi]}, {B.G[hi][lo], B.G[hi][hi]}};
                GramMatrix sub{B.p, 2, G2};
                if (det(G2) == 0) return false;
                GramMatrix d = odd_diagonal_form(sub);
                std::vector<int> g = {d.ord_diag(0), d.ord_diag(1)};
                if (g != std::vector<int>{a[i], a[j]}) return false;
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && j != sigma[i] && !twice_gt(B.ord_off(i, j), a[i] + a[j])) return false;
    return true;
}

std::vector<std::vector<int>> involutions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> s(static_cast<size_t>(n), -1);
    std::function<void(int)> rec = [&](int i) {
        while (i < n && s[i] != -1) ++i;
        if (i == n) {
            out.push_back(s);
            return;
        }
        s[i] = i;
        rec(i + 1);
        for (int j = i + 1; j < n; ++j)
            if (s[j] == -1) {
                s[i] = j;
                s[j] = i;
                rec(i + 1);
                s[j] = -1;
            }
        s[i] = -1;
    };
    rec(0);
    return out;
}

namespace {

GramMatrix from_half(long p, const RMat& b) {
    int n = static_cast<int>(b.size());
    Mat G(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat x = 2 * b[i][j];
            if (x.get_den() != 1) throw std::logic_error("from_half: non-integral 2b");
            G[i][j] = x.get_num();
        }
    return GramMatrix{p, n, G};
}

GramMatrix permuted(const GramMatrix& B, const std::vector<int>& perm) {
    GramMatrix R = B;
    for (int i = 0; i < B.n; ++i)
        for (int j = 0; j < B.n; ++j) R.G[i][j] = B.G[perm[i]][perm[j]];
    return R;
}

// Best S-sequence over basis orderings, and a certificate if one is found.
std::optional<std::vector<int>> certify(const GramMatrix& B, std::vector<int>* best_seen) {
    std::vector<int> perm(static_cast<size_t>(B.n));
    std::iota(perm.begin(), perm.end(), 0);
    auto invs = involutions(B.n);
    do {
        GramMatrix P = permuted(B, perm);
        std::vector<int> a = best_sequence_in_S(P).a;
        if (best_seen && (best_seen->empty() || lex_less(*best_seen, a))) *best_seen = a;
        for (const auto& s : invs)
            if (is_reduced_form(P, a, s)) return a;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

struct HalfForm {
    long p;
    RMat b;
    void add_to(int i, int j, const Rat& c) {  // e_i += c e_j
        int n = static_cast<int>(b.size());
        for (int k = 0; k < n; ++k) b[i][k] += c * b[j][k];
        for (int k = 0; k < n; ++k) b[k][i] += c * b[k][j];
    }
    void swap_basis(int i, int j) {
        std::swap(b[i], b[j]);
        for (auto& row : b) std::swap(row[i], row[j]);
    }
};

// Rank-2 constructive reduction over Z_2.
GramMatrix reduce_binary_z2(const GramMatrix& B) {
    HalfForm h{2, half_matrix(B)};
    auto ord = [](const Rat& x) { return valuation(x, 2); };
    int md = std::min(ord(h.b[0][0]), ord(h.b[1][1]));
    int mo = ord(2 * h.b[0][1]);
    if (mo <= md) return B;  // GK = (mo, mo) with sigma = (12)
    if (ord(h.b[1][1]) < ord(h.b[0][0])) h.swap_basis(0, 1);
    h.add_to(1, 0, -h.b[0][1] / h.b[0][0]);
    if (ord(h.b[1][1]) < ord(h.b[0][0])) h.swap_basis(0, 1);
    int s = ord(h.b[0][0]), t = ord(h.b[1][1]);
    if ((t - s) % 2 != 0) return from_half(2, h.b);
    int m = (t - s) / 2;
    h.add_to(1, 0, rpow(2, m));
    return from_half(2, h.b);
}

// Jordan-type splitting over Z_2 into 1x1 and 2x2 blocks.
RMat jordan_z2(const GramMatrix& B) {
    HalfForm h{2, half_matrix(B)};
    int n = B.n;
    auto ordG = [&](int i, int j) { return valuation(2 * h.b[i][j], 2); };
    int k = 0;
    while (k < n) {
        int best = kInfVal, bi = -1, bj = -1;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) {
                int v = ordG(i, j);
                if (v < best || (v == best && i == j && bi != bj)) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi == bj) {
            h.swap_basis(k, bi);
            for (int j = k + 1; j < n; ++j)
                if (h.b[k][j] != 0) h.add_to(j, k, -h.b[k][j] / h.b[k][k]);
            k += 1;
        } else {
            int i0 = bi, j0 = bj;
            h.swap_basis(k, i0);
            if (j0 == k) j0 = i0;
            h.swap_basis(k + 1, j0);
            RMat blk = {{h.b[k][k], h.b[k][k + 1]}, {h.b[k + 1][k], h.b[k + 1][k + 1]}};
            RMat inv = inverse(blk);
            for (int j = k + 2; j < n; ++j) {
                Rat c0 = -(inv[0][0] * h.b[k][j] + inv[0][1] * h.b[k + 1][j]);
                Rat c1 = -(inv[1][0] * h.b[k][j] + inv[1][1] * h.b[k + 1][j]);
                h.add_to(j, k, c0);
                h.add_to(j, k + 1, c1);
            }
            k += 2;
        }
    }
    return h.b;
}

GKInvariant gk_z2_search(const GramMatrix& B, std::uint64_t seed) {
    std::vector<int> best;
    if (auto a = certify(B, &best)) return GKInvariant{*a, Certainty::Certified};
    GramMatrix J = from_half(2, jordan_z2(B));
    if (auto a = certify(J, &best)) return GKInvariant{*a, Certainty::Certified};
    int n = B.n;
    int tmax = 0;
    for (int i = 0; i < n; ++i) {
        int od = J.ord_diag(i);
        if (od != kInfVal) tmax = std::max(tmax, od);
    }
    tmax += 2;
    // beam search over elementary moves e_j += +-2^t e_i
    struct Node {
        GramMatrix g;
        std::vector<int> score;
    };
    auto score_of = [](const GramMatrix& g) {
        std::vector<int> s;
        certify(g, &s);
        return s;
    };
    std::vector<Node> beam = {{J, score_of(J)}};
    std::set<Mat> seen = {J.G};
    const int width = 24, depth = 5;
    for (int d = 0; d < depth; ++d) {
        std::vector<Node> next;
        for (const auto& node : beam)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    for (int t = 0; t <= tmax; ++t)
                        for (int sg : {1, -1}) {
                            Mat U = identity_mat(n);
                            U[i][j] = sg * ipow(2, static_cast<unsigned>(t));
                            GramMatrix g = transform(node.g, U);
                            if (!seen.insert(g.G).second) continue;
                            std::vector<int> s;
                            if (auto a = certify(g, &s)) return GKInvariant{*a, Certainty::Certified};
                            if (lex_less(best, s)) best = s;
                            next.push_back({g, s});
                        }
                }
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(d));
        std::shuffle(next.begin(), next.end(), rng);
        std::stable_sort(next.begin(), next.end(), [](const Node& x, const Node& y) { return lex_less(y.score, x.score); });
        if (next.size() > static_cast<size_t>(width)) next.resize(static_cast<size_t>(width));
        beam = std::move(next);
        if (beam.empty()) break;
    }
    return GKInvariant{best, Certainty::LowerBound};
}

}  // namespace

GKInvariant gk_invariant(const GramMatrix& B, std::uint64_t seed) {
    if (det(B.G) == 0) throw std::domain_error("gk_invariant: degenerate form");
    if (B.p != 2) {
        GramMatrix d = odd_diagonal_form(B);
        std::vector<int> a;
        for (int i = 0; i < d.n; ++i) a.push_back(d.ord_diag(i));
        return GKInvariant{a, Certainty::Certified};
    }
    if (B.n == 1) return GKInvariant{{B.ord_diag(0)}, Certainty::Certified};
    if (B.n == 2) {
        GramMatrix r = reduce_binary_z2(B);
        if (auto a = certify(r, nullptr)) return GKInvariant{*a, Certainty::Certified};
    }
    return gk_z2_search(B, seed);
}

std::optional<Z2Case> z2_shape_case(const GramMatrix& B) {
    if (B.p != 2 || B.n != 4) return std::nullopt;
    const Mat& G = B.G;
    auto is_A_block = [&](int k) -> std::optional<int> {  // 2^i [[2,1],[1,2]] at rows k,k+1
        if (G[k][k] != G[k + 1][k + 1] || G[k][k] != 2 * G[k][k + 1] || G[k][k + 1] == 0) return std::nullopt;
        BigInt c = G[k][k + 1];
        int i = valuation(c, 2);
        if (c != ipow(2, static_cast<unsigned>(i))) return std::nullopt;
        return i;
    };
    auto zero_outside = [&](const std::vector<std::pair<int, int>>& allowed) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                bool ok = std::find(allowed.begin(), allowed.end(), std::make_pair(std::min(i, j), std::max(i, j))) != allowed.end();
                if (!ok && G[i][j] != 0) return false;
            }
        return true;
    };
    auto bi = is_A_block(0);
    if (bi && zero_outside({{0, 1}, {2, 3}})) {
        if (auto bj = is_A_block(2); bj && *bi <= *bj) return Z2Case::I;
    }
    if (bi && zero_outside({{0, 1}})) {
        if (B.ord_diag(2) <= B.ord_diag(3)) return Z2Case::II;
        return std::nullopt;
    }
    if (!zero_outside({})) return std::nullopt;
    int mu[4];
    for (int i = 0; i < 4; ++i) mu[i] = B.ord_diag(i);
    for (int i = 0; i + 1 < 4; ++i)
        if (mu[i] > mu[i + 1]) return std::nullopt;
    if (!(mu[0] < mu[2] && mu[1] < mu[3])) return std::nullopt;
    if ((mu[0] - mu[1]) % 2 != 0) return Z2Case::IIIa;
    BigInt u1 = B.G[0][0] / 2 / ipow(2, static_cast<unsigned>(mu[0]));
    BigInt u2 = B.G[1][1] / 2 / ipow(2, static_cast<unsigned>(mu[1]));
    long s = mod_floor(u1 + u2, 4);
    if (s == 2 || mu[1] == mu[2]) return Z2Case::IIIb;
    return Z2Case::IIIc;
}

GKInvariant gk_anisotropic_z2(const GramMatrix& B, Z2Case canonical_case) {
    auto detected = z2_shape_case(B);
    if (!detected || *detected != canonical_case) throw std::domain_error("gk_anisotropic_z2: shape mismatch");
    std::vector<int> a;
    switch (canonical_case) {
        case Z2Case::I: {
            int i = valuation(B.G[0][1], 2), j = valuation(B.G[2][3], 2);
            a = {i, i, j, j};
            break;
        }
        case Z2Case::II: {
            int i = valuation(B.G[0][1], 2);
            a = {i, i, B.ord_diag(2), B.ord_diag(3) + 2};
            break;
        }
        case Z2Case::IIIa:
            a = {B.ord_diag(0), B.ord_diag(1), B.ord_diag(2) + 2, B.ord_diag(3) + 2};
            break;
        case Z2Case::IIIb:
            a = {B.ord_diag(0), B.ord_diag(1) + 1, B.ord_diag(2) + 1, B.ord_diag(3) + 2};
            break;
        case Z2Case::IIIc:
            a = {B.ord_diag(0), B.ord_diag(1) + 2, B.ord_diag(2), B.ord_diag(3) + 2};
            break;
    }
    std::sort(a.begin(), a.end());
    return GKInvariant{a, Certainty::Certified};
}

ResidueType residue_type(const GramMatrix& B) {
    long p = B.p;
    int n = B.n;
    const long mod = 2 * p;
    std::vector<std::vector<long>> g(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = mod_floor(B.G[i][j], mod);
    long total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    std::vector<long> v(static_cast<size_t>(n));
    long zeros = 0, radical = 0;
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = 0; i < n; ++i) {
            v[i] = c % p;
            c /= p;
        }
        long vgv = 0;  // v^T G v mod 2p, even
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) vgv = (vgv + g[i][j] * v[i] % mod * v[j]) % mod;
        bool qzero = (vgv / 2) % p == 0;
        if (qzero) ++zeros;
        bool in_rad = qzero;
        for (int i = 0; i < n && in_rad; ++i) {
            long s = 0;
            for (int j = 0; j < n; ++j) s = (s + g[i][j] * v[j]) % p;
            if (s != 0) in_rad = false;
        }
        if (in_rad) ++radical;
    }
    int rad_dim = 0;
    for (long r = radical; r > 1; r /= p) ++rad_dim;
    int a = n - rad_dim;
    long pn1 = total / p;
    if (a % 2 == 1) {
        if (zeros != pn1) throw std::logic_error("residue_type: inconsistent zero count");
        return {a, 0};
    }
    if (a == 0) return {0, 1};
    long hi = 1;
    for (int i = 0; i < n - a / 2; ++i) hi *= p;
    long diff = hi - hi / p;
    long delta = zeros - pn1;
    if (delta == diff) return {a, 1};
    if (delta == -diff) return {a, -1};
    throw std::logic_error("residue_type: inconsistent zero count");
}

Mat hnf_columns(const Mat& M) {
    // rows of R are generators; returns echelon basis (upper triangular rows)
    size_t n = M.size();
    std::vector<std::vector<BigInt>> R;
    for (size_t c = 0; c < M[0].size(); ++c) {
        std::vector<BigInt> r(n);
        for (size_t i = 0; i < n; ++i) r[i] = M[i][c];
        R.push_back(std::move(r));
    }
    Mat H;
    for (size_t col = 0; col < n; ++col) {
        // combine all remaining rows into one with gcd in this column
        int piv = -1;
        for (size_t r = 0; r < R.size(); ++r) {
            if (R[r][col] == 0) continue;
            if (piv < 0) {
                piv = static_cast<int>(r);
                continue;
            }
            auto& P = R[static_cast<size_t>(piv)];
            auto& Q = R[r];
            BigInt g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), P[col].get_mpz_t(), Q[col].get_mpz_t());
            BigInt a = P[col] / g, b = Q[col] / g;
            for (size_t k = 0; k < n; ++k) {
                BigInt np = s * P[k] + t * Q[k];
                BigInt nq = a * Q[k] - b * P[k];
                P[k] = np;
                Q[k] = nq;
            }
        }
        if (piv < 0) throw std::domain_error("hnf_columns: rank deficient");
        std::vector<BigInt> row = R[static_cast<size_t>(piv)];
        R.erase(R.begin() + piv);
        if (row[col] < 0)
            for (auto& x : row) x = -x;
        for (auto& h : H) {
            BigInt q;
            mpz_fdiv_q(q.get_mpz_t(), h[col].get_mpz_t(), row[col].get_mpz_t());
            for (size_t k = 0; k < n; ++k) h[k] -= q * row[k];
        }
        H.push_back(std::move(row));
    }
    return H;
}

RMat dual_lattice(const GramMatrix& B) {
    int n = B.n;
    BigInt d = det(B.G);
    int e = valuation(d, B.p);
    RMat inv = inverse(to_rat(B.G));
    Mat gens(static_cast<size_t>(n), std::vector<BigInt>());
    BigInt pe = ipow(B.p, static_cast<unsigned>(e));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Rat x = inv[i][j] * Rat(d);
            gens[i].push_back(x.get_num());
        }
        for (int j = 0; j < n; ++j) gens[i].push_back(i == j ? pe : BigInt(0));
    }
    Mat H = hnf_columns(gens);
    RMat out(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n)));
    for (int r = 0; r < n; ++r)
        for (int i = 0; i < n; ++i) {
            out[i][r] = frac(H[r][i], pe);
            out[i][r].canonicalize();
        }
    return out;
}

std::vector<Overlattice> integral_overlattices(const GramMatrix& B) {
    long p = B.p;
    int n = B.n;
    int K = valuation(det(B.G), p);
    BigInt pK = ipow(p, static_cast<unsigned>(K));
    auto key_of = [&](const RMat& U) {
        Mat gens(static_cast<size_t>(n), std::vector<BigInt>());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                Rat x = U[i][j] * Rat(pK);
                if (x.get_den() != 1) throw std::logic_error("integral_overlattices: index bound violated");
                gens[i].push_back(x.get_num());
            }
            for (int j = 0; j < n; ++j) gens[i].push_back(i == j ? pK : BigInt(0));
        }
        return hnf_columns(gens);
    };
    std::vector<Overlattice> out;
    RMat I = to_rat(identity_mat(n));
    out.push_back({I, 0, B});
    std::set<Mat> seen = {key_of(I)};
    std::vector<size_t> frontier = {0};
    // projective representatives of nonzero w in F_p^n: first nonzero coordinate is 1
    std::vector<std::vector<long>> lines;
    {
        long total = 1;
        for (int i = 0; i < n; ++i) total *= p;
        for (long code = 1; code < total; ++code) {
            std::vector<long> w(static_cast<size_t>(n));
            long c = code;
            for (int i = 0; i < n; ++i) {
                w[i] = c % p;
                c /= p;
            }
            int f = 0;
            while (w[f] == 0) ++f;
            if (w[f] == 1) lines.push_back(w);
        }
    }
    const BigInt two_p2 = 2 * BigInt(p) * p;
    for (int level = 1; !frontier.empty(); ++level) {
        std::vector<size_t> next;
        for (size_t idx : frontier) {
            const Overlattice cur = out[idx];
            const Mat& Gc = cur.gram.G;
            for (const auto& w : lines) {
                bool ok = true;
                for (int i = 0; i < n && ok; ++i) {
                    BigInt s = 0;
                    for (int j = 0; j < n; ++j) s += Gc[i][j] * w[j];
                    if (s % p != 0) ok = false;
                }
                if (!ok) continue;
                BigInt wgw = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) wgw += Gc[i][j] * w[i] * w[j];
                if (wgw % two_p2 != 0) continue;
                int f = 0;
                while (w[f] == 0) ++f;
                RMat U = cur.basis_change;
                for (int r = 0; r < n; ++r) {
                    Rat s = 0;
                    for (int j = 0; j < n; ++j) s += cur.basis_change[r][j] * w[j];
                    U[r][f] = s / p;
                }
                Mat key = key_of(U);
                if (!seen.insert(key).second) continue;
                auto g = transform_rational(B, U);
                if (!g) throw std::logic_error("integral_overlattices: extension is not integral");
                out.push_back({U, level, *g});
                next.push_back(out.size() - 1);
            }
        }
        frontier = std::move(next);
    }
    return out;
}

bool is_anisotropic(const GramMatrix& B) {
    const long p = B.p;
    const int n = B.n;
    const int e = valuation(det(B.G), p);
    if (e == kInfVal) return false;
    const int depth_cap = 2 * e + 3;
    // all arithmetic mod p^{depth_cap + 1}
    BigInt Mbig = ipow(p, static_cast<unsigned>(depth_cap + 1));
    if (Mbig >= (BigInt(1) << 62)) throw std::domain_error("is_anisotropic: determinant valuation too large");
    using i128 = __int128;
    const std::int64_t M = Mbig.get_si();
    auto red = [M](i128 x) {
        x %= M;
        return static_cast<std::int64_t>(x < 0 ? x + M : x);
    };
    std::vector<std::vector<std::int64_t>> G(static_cast<size_t>(n), std::vector<std::int64_t>(static_cast<size_t>(n)));
    std::vector<std::int64_t> half_diag(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) G[i][j] = mod_floor(B.G[i][j], M);
        half_diag[i] = mod_floor(B.G[i][i] / 2, M);
    }
    auto qform = [&](const std::vector<std::int64_t>& w) {
        i128 s = 0;
        for (int i = 0; i < n; ++i) {
            s += static_cast<i128>(half_diag[i]) * w[i] % M * w[i];
            for (int j = i + 1; j < n; ++j) s += static_cast<i128>(G[i][j]) * w[i] % M * w[j];
            s %= M;
        }
        return red(s);
    };
    auto gvec = [&](const std::vector<std::int64_t>& w) {
        std::vector<std::int64_t> g(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            i128 s = 0;
            for (int j = 0; j < n; ++j) s = (s + static_cast<i128>(G[i][j]) * w[j]) % M;
            g[i] = red(s);
        }
        return g;
    };
    auto val_mod = [&](std::int64_t x) {
        if (x == 0) return kInfVal;
        int v = 0;
        while (x % p == 0) {
            x /= p;
            ++v;
        }
        return v;
    };
    // v is a primitive zero of q mod p^k with v[pivot] = 1; qv = q(v), gv = Gv (mod M)
    std::function<bool(int, std::int64_t, int, std::int64_t, const std::vector<std::int64_t>&)> lifts =
        [&](int pivot, std::int64_t pk, int k, std::int64_t qv, const std::vector<std::int64_t>& gv) -> bool {
        int t = kInfVal;
        for (int i = 0; i < n; ++i) t = std::min(t, val_mod(gv[i]));
        if (t != kInfVal && 2 * t < k) return true;  // Hensel
        if (k >= depth_cap) return true;
        // q(v + p^k w) = q(v) + p^k (Gv . w) mod p^{k+1}
        const std::int64_t c = (qv / pk) % p;
        std::vector<long> g(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) g[i] = static_cast<long>(gv[i] % p);
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            if (i != pivot) free.push_back(i);
        long total = 1;
        for (size_t i = 0; i < free.size(); ++i) total *= p;
        std::vector<std::int64_t> w(static_cast<size_t>(n), 0);
        for (long code = 0; code < total; ++code) {
            long cc = code;
            long lin = c;
            for (int i : free) {
                w[i] = cc % p;
                cc /= p;
                lin += g[i] * w[i];
            }
            if (lin % p != 0) continue;
            std::vector<std::int64_t> gw = gvec(w);
            i128 dot = 0;
            for (int i = 0; i < n; ++i) dot = (dot + static_cast<i128>(gv[i]) * w[i]) % M;
            const i128 pk2 = static_cast<i128>(pk) * pk % M;
            std::int64_t q2 = red(static_cast<i128>(qv) + static_cast<i128>(pk) * dot + pk2 * qform(w));
            std::vector<std::int64_t> g2(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) g2[i] = red(static_cast<i128>(gv[i]) + static_cast<i128>(pk) * gw[i]);
            if (lifts(pivot, pk * p, k + 1, q2, g2)) return true;
        }
        return false;
    };
    long total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    std::vector<std::int64_t> v(static_cast<size_t>(n));
    for (long code = 1; code < total; ++code) {
        long c = code;
        int pivot = -1;
        for (int i = 0; i < n; ++i) {
            v[i] = c % p;
            c /= p;
            if (pivot < 0 && v[i] != 0) pivot = i;
        }
        if (v[pivot] != 1) continue;  // projective representative
        std::int64_t qv = qform(v);
        if (qv % p == 0 && lifts(pivot, p, 1, qv, gvec(v))) return false;
    }
    return true;
}

}  // namespace gkq
