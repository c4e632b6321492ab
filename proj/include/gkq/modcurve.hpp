#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gkq/exactmath.hpp"

namespace gkq {

// x^i y^j
using Monomial = std::pair<int, int>;

struct BivarPolyZ {
    std::map<Monomial, BigInt> c;  // no zero entries
    bool symmetric = false;

    int deg_x() const;
    int deg_y() const;
    bool is_zero() const { return c.empty(); }
    void add(const Monomial& m, const BigInt& v);
    BivarPolyZ operator*(const BivarPolyZ& o) const;
    BivarPolyZ operator-(const BivarPolyZ& o) const;
    bool operator==(const BivarPolyZ& o) const { return c == o.c; }
    BivarPolyZ swapped() const;
};

// Exact quotient A / B over Z, B monic in x; throws std::runtime_error on a nonzero remainder.
BivarPolyZ divide_exact(const BivarPolyZ& A, const BivarPolyZ& B);

class ModpolyError : public std::runtime_error {
public:
    ModpolyError(const std::string& path, int line, const std::string& what);
    int line;
};

// Parsed and checked contents of the modular polynomial file (phi_m and psi_m for m <= 10).
class ModularDb {
public:
    static constexpr int kMaxLevel = 10;
    explicit ModularDb(const std::string& path);
    // flag value if nonempty, else $MODPOLY_DB, else the bundled file
    static std::string resolve_path(const std::string& flag = "");

    const BivarPolyZ& phi(int m) const;
    const BivarPolyZ& psi(int m) const;
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::vector<BivarPolyZ> phi_, psi_;
};

BivarPolyZ load_modpoly(const std::string& db_path, int m);
BivarPolyZ psi_factor(const ModularDb& db, int m);
// deg_x phi_m = sum over n^2 | m of the primitive degree m prod_{q|m}(1+1/q)
long expected_phi_degree(int m);

struct BivarPolyFp {
    std::uint64_t p = 2;
    // descending grevlex, nonzero residues
    std::vector<std::pair<Monomial, std::uint64_t>> terms;

    bool is_zero() const { return terms.empty(); }
    const Monomial& lm() const { return terms.front().first; }
    std::uint64_t lc() const { return terms.front().second; }
    static BivarPolyFp reduce(const BivarPolyZ& f, std::uint64_t p);
    std::string to_string() const;
};

// grevlex: total degree first, then the larger x exponent
bool grevlex_greater(const Monomial& a, const Monomial& b);

struct GroebnerResult {
    std::vector<BivarPolyFp> basis;
    bool zero_dimensional = false;
    std::optional<BigInt> quotient_dim;
    long pairs_reduced = 0;
};

GroebnerResult groebner(const std::vector<BivarPolyFp>& gens);

enum class Level { Psi, Phi };
struct NotZeroDimensional {};
using IntersectionNumber = std::variant<BigInt, NotZeroDimensional>;

IntersectionNumber intersection_number(const ModularDb& db, int m1, int m2, long p, Level level);
// dim F_p[x,y]/(phi_m1, phi_m2) in one Groebner run, no splitting into psi factors
IntersectionNumber intersection_number_direct(const ModularDb& db, int m1, int m2, long p);
std::string to_string(const IntersectionNumber& v);

struct ProperException {
    int m1, m2;
    long p;
    bool zero_dimensional;
};
// Pairs 2 <= m1 <= m2 <= max_m whose zero-dimensionality disagrees with "m1 m2 non-square".
std::vector<ProperException> properness_scan(const ModularDb& db, int max_m, const std::vector<long>& primes);

}  // namespace gkq
