#include "gkq/modcurve.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "gkq/eisenstein.hpp"

#ifndef GKQ_MODPOLY_DEFAULT
#define GKQ_MODPOLY_DEFAULT "data/modpoly.txt"
#endif

namespace gkq {

// ---- integer bivariate polynomials

int BivarPolyZ::deg_x() const {
    int d = -1;
    for (const auto& [m, v] : c) d = std::max(d, m.first);
    return d;
}

int BivarPolyZ::deg_y() const {
    int d = -1;
    for (const auto& [m, v] : c) d = std::max(d, m.second);
    return d;
}

void BivarPolyZ::add(const Monomial& m, const BigInt& v) {
    if (v == 0) return;
    auto it = c.find(m);
    if (it == c.end()) {
        c.emplace(m, v);
        return;
    }
    it->second += v;
    if (it->second == 0) c.erase(it);
}

BivarPolyZ BivarPolyZ::operator*(const BivarPolyZ& o) const {
    BivarPolyZ r;
    for (const auto& [a, u] : c)
        for (const auto& [b, v] : o.c) r.add({a.first + b.first, a.second + b.second}, u * v);
    return r;
}

BivarPolyZ BivarPolyZ::operator-(const BivarPolyZ& o) const {
    BivarPolyZ r = *this;
    for (const auto& [m, v] : o.c) r.add(m, -v);
    return r;
}

BivarPolyZ BivarPolyZ::swapped() const {
    BivarPolyZ r;
    for (const auto& [m, v] : c) r.c.emplace(Monomial{m.second, m.first}, v);
    return r;
}

BivarPolyZ divide_exact(const BivarPolyZ& A, const BivarPolyZ& B) {
    const int d = B.deg_x();
    if (d < 0) throw std::invalid_argument("divide_exact: zero divisor");
    for (const auto& [m, v] : B.c)
        if (m.first == d && (m.second != 0 || v != 1)) throw std::invalid_argument("divide_exact: divisor not monic in x");
    BivarPolyZ R = A, Q;
    while (!R.is_zero()) {
        // highest x-degree term; B's top x part is exactly x^d so each step removes it
        auto top = std::max_element(R.c.begin(), R.c.end(),
                                    [](const auto& a, const auto& b) { return a.first < b.first; });
        if (top->first.first < d) throw std::runtime_error("divide_exact: nonzero remainder");
        Monomial s{top->first.first - d, top->first.second};
        BigInt v = top->second;
        Q.add(s, v);
        for (const auto& [m, w] : B.c) R.add({m.first + s.first, m.second + s.second}, -v * w);
    }
    return Q;
}

// ---- data file

ModpolyError::ModpolyError(const std::string& path, int line_, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line_) + ": " + what), line(line_) {}

namespace {

long primitive_degree(long m) {
    long r = m, n = m;
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            r = r / q * (q + 1);
            while (n % q == 0) n /= q;
        }
    if (n > 1) r = r / n * (n + 1);
    return r;
}

bool is_prime_small(long m) {
    if (m < 2) return false;
    for (long q = 2; q * q <= m; ++q)
        if (m % q == 0) return false;
    return true;
}

bool is_square_long(long m) {
    long r = 0;
    while ((r + 1) * (r + 1) <= m) ++r;
    return r * r == m;
}

BivarPolyZ reduce_mod(const BivarPolyZ& f, long p) {
    BivarPolyZ r;
    for (const auto& [m, v] : f.c) {
        BigInt w = v % p;
        if (w < 0) w += p;
        r.add(m, w);
    }
    return r;
}

// phi_l = (x^l - y)(x - y^l) mod l
bool kronecker_ok(const BivarPolyZ& phi, long l) {
    BivarPolyZ a, b;
    a.add({static_cast<int>(l), 0}, 1);
    a.add({0, 1}, -1);
    b.add({1, 0}, 1);
    b.add({0, static_cast<int>(l)}, -1);
    return reduce_mod(phi, l) == reduce_mod(a * b, l);
}

}  // namespace

long expected_phi_degree(int m) {
    long d = 0;
    for (long n = 1; n * n <= m; ++n)
        if (m % (n * n) == 0) d += primitive_degree(m / (n * n));
    return d;
}

std::string ModularDb::resolve_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("MODPOLY_DB"); env && *env) return env;
    return GKQ_MODPOLY_DEFAULT;
}

ModularDb::ModularDb(const std::string& path) : path_(path), phi_(kMaxLevel + 1), psi_(kMaxLevel + 1) {
    std::ifstream in(path);
    if (!in) throw ModpolyError(path, 0, "cannot open modular polynomial file");
    std::vector<int> first_line(kMaxLevel + 1, 0);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string line = raw.substr(0, hash);
        std::istringstream ss(line);
        std::string tok[5];
        int ntok = 0;
        while (ntok < 5 && ss >> tok[ntok]) ++ntok;
        if (ntok == 0) continue;
        if (ntok != 4) throw ModpolyError(path, lineno, "expected 'm i j coefficient'");
        int m, i, j;
        try {
            size_t pos;
            m = std::stoi(tok[0], &pos);
            if (pos != tok[0].size()) throw std::invalid_argument("m");
            i = std::stoi(tok[1], &pos);
            if (pos != tok[1].size()) throw std::invalid_argument("i");
            j = std::stoi(tok[2], &pos);
            if (pos != tok[2].size()) throw std::invalid_argument("j");
        } catch (const std::exception&) {
            throw ModpolyError(path, lineno, "bad integer field");
        }
        BigInt v;
        std::string cs = tok[3][0] == '+' ? tok[3].substr(1) : tok[3];
        if (cs.empty() || v.set_str(cs, 10) != 0) throw ModpolyError(path, lineno, "bad coefficient '" + tok[3] + "'");
        if (m < 1 || m > kMaxLevel) throw ModpolyError(path, lineno, "level out of range");
        if (i < 0 || j < 0) throw ModpolyError(path, lineno, "negative exponent");
        if (v == 0) continue;
        if (!first_line[m]) first_line[m] = lineno;
        const bool sq = is_square_long(m);
        if (i == j && sq) throw ModpolyError(path, lineno, "diagonal term in an antisymmetric polynomial");
        BivarPolyZ& P = phi_[m];
        auto put = [&](Monomial mono, const BigInt& w) {
            auto [it, fresh] = P.c.emplace(mono, w);
            if (!fresh && it->second != w) throw ModpolyError(path, lineno, "conflicting duplicate monomial");
        };
        put({i, j}, v);
        if (i != j) put({j, i}, sq ? BigInt(-v) : v);
    }
    for (int m = 1; m <= kMaxLevel; ++m) {
        BivarPolyZ& P = phi_[m];
        if (P.is_zero()) throw ModpolyError(path, lineno, "no records for m=" + std::to_string(m));
        const int at = first_line[m];
        P.symmetric = P.swapped() == P;
        long deg = expected_phi_degree(m);
        if (P.deg_x() != deg || P.deg_y() != deg)
            throw ModpolyError(path, at, "phi_" + std::to_string(m) + " has degree " + std::to_string(P.deg_x()) +
                                             ", expected " + std::to_string(deg));
        if (is_prime_small(m) && !kronecker_ok(P, m))
            throw ModpolyError(path, at, "Kronecker congruence fails for phi_" + std::to_string(m));
    }
    BivarPolyZ x_minus_y;
    x_minus_y.add({1, 0}, 1);
    x_minus_y.add({0, 1}, -1);
    if (!(phi_[1] == x_minus_y)) throw ModpolyError(path, first_line[1], "phi_1 must be x - y");
    for (int m = 1; m <= kMaxLevel; ++m) {
        BivarPolyZ q = phi_[m];
        try {
            for (int n = 2; n * n <= m; ++n)
                if (m % (n * n) == 0) q = divide_exact(q, psi_[m / (n * n)]);
        } catch (const std::exception& e) {
            throw ModpolyError(path, first_line[m], "psi_" + std::to_string(m) + ": " + e.what());
        }
        q.symmetric = q.swapped() == q;
        psi_[m] = std::move(q);
    }
}

const BivarPolyZ& ModularDb::phi(int m) const {
    if (m < 1 || m > kMaxLevel) throw std::out_of_range("phi_m: m outside 1.." + std::to_string(kMaxLevel));
    return phi_[m];
}

const BivarPolyZ& ModularDb::psi(int m) const {
    if (m < 1 || m > kMaxLevel) throw std::out_of_range("psi_m: m outside 1.." + std::to_string(kMaxLevel));
    return psi_[m];
}

BivarPolyZ load_modpoly(const std::string& db_path, int m) { return ModularDb(db_path).phi(m); }

BivarPolyZ psi_factor(const ModularDb& db, int m) { return db.psi(m); }

// ---- polynomials over F_p

using u64 = std::uint64_t;

bool grevlex_greater(const Monomial& a, const Monomial& b) {
    int da = a.first + a.second, db = b.first + b.second;
    if (da != db) return da > db;
    return a.first > b.first;
}

namespace {

u64 inv_mod(u64 a, u64 p) {
    u64 r = 1, e = p - 2;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

bool divides(const Monomial& a, const Monomial& b) { return a.first <= b.first && a.second <= b.second; }

Monomial lcm(const Monomial& a, const Monomial& b) {
    return {std::max(a.first, b.first), std::max(a.second, b.second)};
}

// f[from..] - c * mono * g
BivarPolyFp sub_scaled(const BivarPolyFp& f, size_t from, u64 c, const Monomial& mono, const BivarPolyFp& g) {
    const u64 p = f.p;
    BivarPolyFp r;
    r.p = p;
    r.terms.reserve(f.terms.size() - from + g.terms.size());
    size_t i = from, j = 0;
    while (i < f.terms.size() || j < g.terms.size()) {
        Monomial gm;
        if (j < g.terms.size()) gm = {g.terms[j].first.first + mono.first, g.terms[j].first.second + mono.second};
        if (j == g.terms.size() || (i < f.terms.size() && grevlex_greater(f.terms[i].first, gm))) {
            r.terms.push_back(f.terms[i++]);
        } else if (i == f.terms.size() || grevlex_greater(gm, f.terms[i].first)) {
            r.terms.push_back({gm, (p - c * g.terms[j++].second % p) % p});
        } else {
            u64 v = (f.terms[i++].second + p - c * g.terms[j++].second % p) % p;
            if (v) r.terms.push_back({gm, v});
        }
    }
    return r;
}

void make_monic(BivarPolyFp& f) {
    if (f.is_zero() || f.lc() == 1) return;
    u64 s = inv_mod(f.lc(), f.p);
    for (auto& t : f.terms) t.second = t.second * s % f.p;
}

// full normal form modulo G; skip is an index of G not to use (or -1)
BivarPolyFp normal_form(BivarPolyFp f, const std::vector<BivarPolyFp>& G, long skip = -1) {
    BivarPolyFp r;
    r.p = f.p;
    size_t pos = 0;
    while (pos < f.terms.size()) {
        const auto [m, c] = f.terms[pos];
        const BivarPolyFp* red = nullptr;
        for (size_t k = 0; k < G.size(); ++k)
            if (static_cast<long>(k) != skip && !G[k].is_zero() && divides(G[k].lm(), m)) {
                red = &G[k];
                break;
            }
        if (!red) {
            r.terms.push_back(f.terms[pos++]);
            continue;
        }
        // G entries are monic
        f = sub_scaled(f, pos, c, {m.first - red->lm().first, m.second - red->lm().second}, *red);
        pos = 0;
    }
    return r;
}

BivarPolyFp s_poly(const BivarPolyFp& f, const BivarPolyFp& g) {
    // (L/lm f) f - (L/lm g) g, both monic
    Monomial L = lcm(f.lm(), g.lm());
    BivarPolyFp zero;
    zero.p = f.p;
    BivarPolyFp a = sub_scaled(zero, 0, f.p - 1, {L.first - f.lm().first, L.second - f.lm().second}, f);
    return sub_scaled(a, 0, 1, {L.first - g.lm().first, L.second - g.lm().second}, g);
}

}  // namespace

BivarPolyFp BivarPolyFp::reduce(const BivarPolyZ& f, u64 p) {
    BivarPolyFp r;
    r.p = p;
    for (const auto& [m, v] : f.c) {
        BigInt w = v % static_cast<unsigned long>(p);
        if (w < 0) w += static_cast<unsigned long>(p);
        if (w != 0) r.terms.push_back({m, w.get_ui()});
    }
    std::sort(r.terms.begin(), r.terms.end(),
              [](const auto& a, const auto& b) { return grevlex_greater(a.first, b.first); });
    return r;
}

std::string BivarPolyFp::to_string() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms) {
        if (!s.empty()) s += " + ";
        s += std::to_string(c);
        if (m.first) s += "*x^" + std::to_string(m.first);
        if (m.second) s += "*y^" + std::to_string(m.second);
    }
    return s;
}

GroebnerResult groebner(const std::vector<BivarPolyFp>& gens) {
    if (gens.empty()) throw std::invalid_argument("groebner: no generators");
    const u64 p = gens.front().p;
    std::vector<BivarPolyFp> G;
    for (const auto& g : gens) {
        if (g.p != p) throw std::invalid_argument("groebner: generators over different primes");
        if (g.is_zero()) continue;
        G.push_back(g);
        make_monic(G.back());
    }
    GroebnerResult res;
    std::set<std::pair<size_t, size_t>> pending;
    for (size_t j = 0; j < G.size(); ++j)
        for (size_t i = 0; i < j; ++i) pending.insert({i, j});
    auto is_pending = [&](size_t a, size_t b) { return pending.count({std::min(a, b), std::max(a, b)}) > 0; };
    while (!pending.empty()) {
        // normal strategy: smallest lcm first
        auto best = pending.begin();
        for (auto it = pending.begin(); it != pending.end(); ++it)
            if (grevlex_greater(lcm(G[best->first].lm(), G[best->second].lm()),
                                lcm(G[it->first].lm(), G[it->second].lm())))
                best = it;
        auto [i, j] = *best;
        pending.erase(best);
        const Monomial a = G[i].lm(), b = G[j].lm();
        if (std::min(a.first, b.first) == 0 && std::min(a.second, b.second) == 0) continue;  // coprime
        const Monomial L = lcm(a, b);
        bool chain = false;
        for (size_t k = 0; k < G.size() && !chain; ++k)
            chain = k != i && k != j && divides(G[k].lm(), L) && !is_pending(i, k) && !is_pending(j, k);
        if (chain) continue;
        ++res.pairs_reduced;
        BivarPolyFp h = normal_form(s_poly(G[i], G[j]), G);
        if (h.is_zero()) continue;
        make_monic(h);
        G.push_back(std::move(h));
        for (size_t k = 0; k + 1 < G.size(); ++k) pending.insert({k, G.size() - 1});
    }
    // minimal, then reduced
    std::vector<BivarPolyFp> M;
    for (size_t i = 0; i < G.size(); ++i) {
        bool redundant = false;
        for (size_t k = 0; k < G.size() && !redundant; ++k) {
            if (k == i || !divides(G[k].lm(), G[i].lm())) continue;
            redundant = G[k].lm() != G[i].lm() || k < i;
        }
        if (!redundant) M.push_back(G[i]);
    }
    for (size_t i = 0; i < M.size(); ++i) {
        M[i] = normal_form(M[i], M, static_cast<long>(i));
        make_monic(M[i]);
    }
    std::sort(M.begin(), M.end(), [](const auto& f, const auto& g) { return grevlex_greater(f.lm(), g.lm()); });
    res.basis = std::move(M);
    int ax = -1, by = -1;
    for (const auto& g : res.basis) {
        const Monomial& m = g.lm();
        if (m.second == 0 && (ax < 0 || m.first < ax)) ax = m.first;
        if (m.first == 0 && (by < 0 || m.second < by)) by = m.second;
    }
    res.zero_dimensional = ax >= 0 && by >= 0;
    if (res.zero_dimensional) {
        long count = 0;
        for (int i = 0; i < ax; ++i)
            for (int j = 0; j < by; ++j) {
                bool in_lt = false;
                for (const auto& g : res.basis)
                    if (divides(g.lm(), {i, j})) {
                        in_lt = true;
                        break;
                    }
                if (!in_lt) ++count;
            }
        res.quotient_dim = BigInt(count);
    }
    return res;
}

// ---- intersection numbers

namespace {

void check_args(int m1, int m2, long p) {
    if (m1 < 1 || m2 < 1 || m1 > ModularDb::kMaxLevel || m2 > ModularDb::kMaxLevel)
        throw std::invalid_argument("intersection_number: levels must lie in 1.." +
                                    std::to_string(ModularDb::kMaxLevel));
    if (!is_prime_small(p) || p >= (1L << 31)) throw std::invalid_argument("intersection_number: p must be a prime < 2^31");
}

IntersectionNumber dim_of(const BivarPolyZ& f, const BivarPolyZ& g, long p) {
    GroebnerResult r = groebner({BivarPolyFp::reduce(f, p), BivarPolyFp::reduce(g, p)});
    if (!r.zero_dimensional) return NotZeroDimensional{};
    return *r.quotient_dim;
}

}  // namespace

IntersectionNumber intersection_number(const ModularDb& db, int m1, int m2, long p, Level level) {
    check_args(m1, m2, p);
    if (level == Level::Psi) return dim_of(db.psi(m1), db.psi(m2), p);
    BigInt total = 0;
    for (int n1 = 1; n1 * n1 <= m1; ++n1) {
        if (m1 % (n1 * n1)) continue;
        for (int n2 = 1; n2 * n2 <= m2; ++n2) {
            if (m2 % (n2 * n2)) continue;
            int a = m1 / (n1 * n1), b = m2 / (n2 * n2);
            // psi_1 = x - y against a non-square level: the diagonal restriction, by the divisor formula
            if ((a == 1) != (b == 1) && !is_square_long(a * b)) {
                total += d_one_m_primitive(a == 1 ? b : a);
                continue;
            }
            IntersectionNumber t = dim_of(db.psi(a), db.psi(b), p);
            if (std::holds_alternative<NotZeroDimensional>(t)) return t;
            total += std::get<BigInt>(t);
        }
    }
    return total;
}

IntersectionNumber intersection_number_direct(const ModularDb& db, int m1, int m2, long p) {
    check_args(m1, m2, p);
    return dim_of(db.phi(m1), db.phi(m2), p);
}

std::string to_string(const IntersectionNumber& v) {
    if (std::holds_alternative<NotZeroDimensional>(v)) return "NOT_ZERO_DIMENSIONAL";
    return std::get<BigInt>(v).get_str();
}

std::vector<ProperException> properness_scan(const ModularDb& db, int max_m, const std::vector<long>& primes) {
    struct Job {
        int m1, m2;
        long p;
    };
    std::vector<Job> jobs;
    for (int m1 = 2; m1 <= max_m; ++m1)
        for (int m2 = m1; m2 <= max_m; ++m2)
            for (long p : primes) jobs.push_back({m1, m2, p});
    std::vector<char> zd(jobs.size());
    const long nj = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < nj; ++t) {
        const Job& j = jobs[static_cast<size_t>(t)];
        zd[static_cast<size_t>(t)] = std::holds_alternative<BigInt>(intersection_number_direct(db, j.m1, j.m2, j.p));
    }
    std::vector<ProperException> out;
    for (size_t t = 0; t < jobs.size(); ++t) {
        bool expect = !is_square_long(static_cast<long>(jobs[t].m1) * jobs[t].m2);
        if (static_cast<bool>(zd[t]) != expect) out.push_back({jobs[t].m1, jobs[t].m2, jobs[t].p, static_cast<bool>(zd[t])});
    }
    return out;
}

}  // namespace gkq
