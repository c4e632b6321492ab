#include "gkq/verify.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "gkq/eisenstein.hpp"
#include "gkq/gkmult.hpp"
#include "gkq/modcurve.hpp"
#include "gkq/realize.hpp"

namespace gkq {

void CaseLog::check(const std::string& key, bool ok, const std::string& expected, const std::string& actual) {
    ++cases;
    if (!ok) failures.push_back({key, expected, actual});
}

void CaseLog::guard(const std::string& key, const std::function<void()>& body) {
    try {
        body();
    } catch (const InfeasibleBudget&) {
        throw;
    } catch (const std::exception& e) {
        check(key, false, "no exception", std::string("exception: ") + e.what());
    }
}

const std::vector<TableEntry>& psi_table() {
    static const std::vector<TableEntry> t = {
        {2, 3, 18},  {2, 4, 28},  {2, 5, 30},  {2, 6, 56},  {2, 7, 42},  {2, 9, 62},  {3, 4, 38},
        {3, 5, 40},  {3, 6, 78},  {3, 7, 56},  {3, 8, 82},  {3, 9, 84},  {4, 5, 60},  {4, 6, 118},
        {4, 7, 84},  {4, 8, 124}, {5, 6, 122}, {5, 7, 84},  {5, 8, 126}, {5, 9, 128}, {6, 7, 168},
        {6, 8, 248}, {6, 9, 252}, {7, 8, 170}, {7, 9, 172}, {8, 9, 256},
    };
    return t;
}

namespace {

std::string key_of(const char* tag, std::initializer_list<long> xs) {
    std::string s = tag;
    s += "(";
    bool first = true;
    for (long x : xs) {
        if (!first) s += ",";
        s += std::to_string(x);
        first = false;
    }
    return s + ")";
}

std::string tuple_str(const std::vector<int>& a) {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
}

std::string lattice_key(const char* tag, const GramMatrix& L) { return std::string(tag) + " " + to_json(L); }

// diag(u_i p^{a_i}) over unit classes {1, nonresidue}, valuations nondecreasing
std::vector<GramMatrix> diagonal_family(long p, int n, int max_val) {
    std::vector<GramMatrix> out;
    const long nr = nonresidue(p);
    std::vector<int> a(static_cast<size_t>(n), 0);
    std::function<void(int, int)> vals = [&](int i, int lo) {
        if (i == n) {
            for (int mask = 0; mask < (1 << n); ++mask) {
                std::vector<BigInt> b;
                for (int k = 0; k < n; ++k) b.push_back(BigInt((mask >> k) & 1 ? nr : 1) * ipow(p, a[k]));
                out.push_back(diagonal_gram(p, b));
            }
            return;
        }
        for (int v = lo; v <= max_val; ++v) {
            a[i] = v;
            vals(i + 1, v);
        }
    };
    vals(0, 0);
    return out;
}

// ---- 1
void suite_psi_table(const VerifyOptions& opt, CaseLog& log) {
    ModularDb db(ModularDb::resolve_path(opt.modpoly_db));
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
        for (const auto& e : psi_table()) {
            std::string key = key_of("d", {e.m1, e.m2, p});
            log.guard(key, [&] {
                log.equal(key, std::to_string(e.d), to_string(intersection_number(db, e.m1, e.m2, p, Level::Psi)));
            });
        }
}

// ---- 2
void suite_eisenstein_identity(const VerifyOptions& opt, CaseLog& log) {
    ModularDb db(ModularDb::resolve_path(opt.modpoly_db));
    for (long p : {3L, 5L, 7L})
        for (const auto& e : psi_table()) {
            std::string key = key_of("phi-vs-eisenstein", {e.m1, e.m2, p});
            log.guard(key, [&] {
                log.equal(key, to_string(eisenstein_sum(e.m1, e.m2, p, ChiFilter::All)),
                          to_string(intersection_number(db, e.m1, e.m2, p, Level::Phi)));
            });
        }
    log.equal("phi(2,4,7)", "32", to_string(intersection_number(db, 2, 4, 7, Level::Phi)));
}

// ---- 3
void density_case(const GramMatrix& L, int k, const VerifyOptions& opt, CaseLog& log) {
    std::string key = lattice_key("density", L) + " k=" + std::to_string(k);
    log.guard(key, [&] {
        int e = valuation(det(L.G), L.p);
        int N = std::max(2, e + 2);
        DensityOracleResult r = density_oracle(L, k, N, opt.budget);
        Rat F = poly_eval(siegel_series(L), rpow(L.p, -k));
        log.check(key, r.stabilized && r.density == F, to_string(F),
                  to_string(r.density) + (r.stabilized ? "" : " (not stabilized)") + " N=" + std::to_string(N));
    });
}

void suite_oracle(const VerifyOptions& opt, CaseLog& log) {
    for (long p : {3L, 5L})
        for (const auto& L : diagonal_family(p, 1, 4))
            for (int k : {1, 2}) density_case(L, k, opt, log);
    for (const auto& L : diagonal_family(3, 2, 3)) {
        if (L.ord_diag(0) + L.ord_diag(1) > 3) continue;
        density_case(L, 2, opt, log);
    }
}

// ---- 4
void suite_inductive(const VerifyOptions&, CaseLog& log) {
    long diag_cases = 0;
    for (long p : {3L, 5L})
        for (int n = 1; n <= 3; ++n)
            for (const auto& L : diagonal_family(p, n, 3)) {
                int top = L.ord_diag(n - 1);
                if (top < 2) continue;  // L^{(d,n)} not integral
                int d = 0;
                for (int i = 0; i < n; ++i) d += L.ord_diag(i) == top;
                std::string key = lattice_key("inductive_rhs", L);
                log.guard(key, [&] {
                    log.equal(key, siegel_series(L).to_string(), inductive_rhs(L, d).to_string());
                    ++diag_cases;
                });
            }
    log.check("inductive diagonal cases >= 50", diag_cases >= 50, ">= 50", std::to_string(diag_cases));
    for (long p : {3L, 2L})
        for (int n = 1; n <= 4; ++n)
            for (const auto& [gk, lats] : anisotropic_catalog(p, n, 6, 6))
                for (const auto& L : lats) {
                    std::string key = lattice_key("aniso_inductive", L);
                    log.guard(key, [&] { log.equal(key, siegel_series(L).to_string(), aniso_inductive(L).to_string()); });
                }
}

// ---- 5
void suite_aniso_identities(const VerifyOptions&, CaseLog& log) {
    for (long p : {2L, 3L, 5L}) {
        for (int a1 = 0; a1 <= 6; ++a1)
            for (int a2 = a1; a2 <= 6; ++a2) {
                std::string key = key_of("t-sum-identity", {a1, a2, p});
                log.guard(key, [&] { log.check(key, identity_t_sum(a1, a2, p)); });
            }
        for (int a1 = 0; a1 <= 6; ++a1)
            for (int a2 = a1; a2 <= 6; ++a2)
                for (int a3 = a2; a3 <= 6; ++a3) {
                    if (!is_aniso_rank3_gk({a1, a2, a3})) continue;
                    std::string key = key_of("alpha-p-identity", {a1, a2, a3, p});
                    log.guard(key, [&] { log.check(key, identity_alpha_p(a1, a2, a3, p)); });
                }
        log.equal(key_of("alpha", {0, 0, 1, p}), "1", alpha_p(0, 0, 1, p).get_str());
        log.equal(key_of("alpha", {0, 1, 1, p}), "2", alpha_p(0, 1, 1, p).get_str());
        log.equal(key_of("T", {0, 0, p}), "1", t_sum(0, 0, p).get_str());
        log.equal(key_of("T", {0, 1, p}), "2", t_sum(0, 1, p).get_str());
        log.equal(key_of("T", {1, 1, p}), std::to_string(2 * (p + 1)), t_sum(1, 1, p).get_str());
    }
}

// ---- 6
void suite_funceq(const VerifyOptions&, CaseLog& log) {
    for (long p : {3L, 5L}) {
        auto cat = anisotropic_catalog(p, 2, 8, 8);
        for (const auto& [gk, lats] : cat) {
            std::string key = "funceq " + tuple_str(gk) + " p=" + std::to_string(p);
            log.guard(key, [&] { log.check(key, functional_equation_check_gk(gk, p)); });
            std::string lkey = lattice_key("funceq", lats.front());
            log.guard(lkey, [&] { log.check(lkey, functional_equation_check(lats.front())); });
        }
        // every |GK| <= 8 rank-2 tuple is anisotropic-realizable
        long expected = 0;
        for (int a1 = 0; a1 <= 8; ++a1)
            for (int a2 = a1; a1 + a2 <= 8; ++a2) ++expected;
        log.equal("rank-2 anisotropic tuples p=" + std::to_string(p), std::to_string(expected), std::to_string(cat.size()));
    }
}

// ---- 7
void suite_quasicanonical(const VerifyOptions&, CaseLog& log) {
    for (long p : {2L, 3L, 5L}) {
        long seen[5] = {0, 0, 0, 0, 0};
        for (int a1 = 0; a1 <= 4; ++a1)
            for (int a2 = 0; a2 <= 4; ++a2)
                for (int b1 = 0; b1 <= 4; ++b1)
                    for (int b2 = 0; b2 <= 4; ++b2) {
                        std::string key = key_of("qc", {a1, a2, b1, b2, p});
                        log.guard(key, [&] {
                            QuasiCanonicalResult r = quasicanonical_sum(a1, a2, b1, b2, p);
                            ++seen[static_cast<int>(r.which)];
                            log.equal(key, r.expected.get_str(), r.sum.get_str());
                        });
                    }
        for (int c = 1; c <= 4; ++c)
            log.check(key_of("case reached", {c, p}), seen[c] > 0, "> 0", std::to_string(seen[c]));
    }
}

// ---- 8
void suite_properness(const VerifyOptions& opt, CaseLog& log) {
    ModularDb db(ModularDb::resolve_path(opt.modpoly_db));
    const std::vector<long> primes = {2, 3, 5, 7};
    auto ex = properness_scan(db, 9, primes);
    for (int m1 = 2; m1 <= 9; ++m1)
        for (int m2 = m1; m2 <= 9; ++m2)
            for (long p : primes) {
                auto it = std::find_if(ex.begin(), ex.end(),
                                       [&](const ProperException& e) { return e.m1 == m1 && e.m2 == m2 && e.p == p; });
                bool square = is_square(BigInt(m1 * m2));
                log.check(key_of("proper", {m1, m2, p}), it == ex.end(), square ? "not zero-dimensional" : "zero-dimensional",
                          square ? "zero-dimensional" : "not zero-dimensional");
            }
}

// ---- 9
Mat random_unimodular(int n, std::mt19937_64& rng) {
    Mat U = identity_mat(n);
    if (n < 2) {
        if (rng() & 1) U[0][0] = -1;
        return U;
    }
    std::uniform_int_distribution<int> pick(0, n - 1), coef(-3, 3);
    for (int step = 0; step < 4 * n; ++step) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int c = coef(rng);
        for (int r = 0; r < n; ++r) U[r][j] += c * U[r][i];  // column op
    }
    return U;
}

void suite_structural(const VerifyOptions& opt, CaseLog& log) {
    std::vector<GramMatrix> lats;
    for (long p : {3L, 5L})
        for (int n = 1; n <= 3; ++n)
            for (const auto& L : diagonal_family(p, n, 2)) lats.push_back(L);
    for (const auto& L : lats) {
        std::string key = lattice_key("F(0)=1,F(1)=0", L);
        log.guard(key, [&] {
            UniPoly F = siegel_series(L);
            log.check(key, F.coeff(0) == 1 && poly_eval(F, Rat(1)) == 0, "1, 0",
                      F.coeff(0).get_str() + ", " + to_string(poly_eval(F, Rat(1))));
        });
    }
    for (const auto& L : diagonal_family(3, 3, 3)) {
        GKInvariant g = gk_invariant(L);
        std::string key = lattice_key("propzero", L);
        log.equal(key, std::to_string(std::count(g.a.begin(), g.a.end(), 0)), std::to_string(residue_type(L).a));
        for (const auto& ov : integral_overlattices(L)) {
            std::string okey = lattice_key("gk drop", L) + " -> " + to_json(ov.gram);
            log.equal(okey, std::to_string(g.total() - 2 * ov.index_b), std::to_string(gk_invariant(ov.gram).total()));
        }
    }
    for (long p : {2L, 3L, 5L})
        for (int n = 3; n <= 4; ++n)
            for (const auto& [gk, ls] : anisotropic_catalog(p, n, 6, 6)) {
                int even = 0;
                for (int a : gk) even += a % 2 == 0;
                bool ok = n == 3 ? (even == 1 || even == 2) : even == 2;
                log.check("parity " + tuple_str(gk) + " p=" + std::to_string(p), ok, "two entries share parity",
                          std::to_string(even) + " even");
                if (p == 2 && n == 4) {
                    const GramMatrix& L = ls.front();
                    log.equal(lattice_key("propzero z2", L), std::to_string(std::count(gk.begin(), gk.end(), 0)),
                              std::to_string(residue_type(L).a));
                }
            }
    for (long f : {2L, 3L, 5L})
        for (int m = 1; m <= 8; ++m) {
            BigInt s = 0;
            for (int k = 0; k <= m; ++k) {
                BigInt t = ipow(f, static_cast<unsigned>(k * (k - 1) / 2)) * q_binomial(m, k, f);
                s += k % 2 ? BigInt(-t) : t;
            }
            log.equal(key_of("q-binomial alternating", {m, f}), "0", s.get_str());
        }
    std::mt19937_64 rng(opt.seed);
    for (const auto& L : diagonal_family(3, 3, 2)) {
        GKInvariant g = gk_invariant(L);
        for (int t = 0; t < 5; ++t) {
            GramMatrix M = transform(L, random_unimodular(L.n, rng));
            log.equal(lattice_key("gk invariance", M), to_string(g), to_string(gk_invariant(M)));
        }
    }
}

}  // namespace

const std::vector<Suite>& suite_registry() {
    static const std::vector<Suite> reg = {
        {"psi-table", "tabulated psi-level intersection numbers at p in {2,3,5,7,11,13}", suite_psi_table},
        {"eisenstein-identity", "phi-level intersection number = Eisenstein coefficient sum, p in {3,5,7}", suite_eisenstein_identity},
        {"oracle", "Siegel series at p^-k = point-count density", suite_oracle},
        {"inductive", "inductive and anisotropic recursions = Siegel series", suite_inductive},
        {"aniso-identities", "alpha_p and T_{a1,a2} identities, p in {2,3,5}", suite_aniso_identities},
        {"funceq", "rank-2 anisotropic functional equation, |GK| <= 8, p in {3,5}", suite_funceq},
        {"quasicanonical", "quasi-canonical weights sum to p^r, entries <= 4", suite_quasicanonical},
        {"properness", "zero-dimensional iff m1 m2 non-square, m <= 9", suite_properness},
        {"structural", "structural invariants of Siegel series and GK", suite_structural},
    };
    return reg;
}

VerifyReport run_suite(const Suite& s, const VerifyOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    CaseLog log;
    s.run(opt, log);
    VerifyReport r;
    r.suite = s.name;
    r.cases = log.cases;
    r.failures = std::move(log.failures);
    std::sort(r.failures.begin(), r.failures.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<VerifyReport> run_suites(const std::string& name, const VerifyOptions& opt) {
    std::vector<VerifyReport> out;
    for (const auto& s : suite_registry())
        if (name == "all" || name == s.name) out.push_back(run_suite(s, opt));
    if (out.empty()) throw std::invalid_argument("unknown suite '" + name + "'");
    return out;
}

}  // namespace gkq
