#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gkq/exactmath.hpp"
#include "gkq/quadlat.hpp"

namespace gkq {

// (a, chi, b) -> number of overlattices with that residue type and index p^b
using SCountTable = std::map<std::tuple<int, int, int>, BigInt>;

SCountTable s_counts(const GramMatrix& L);
BigInt prim_count(int a, int chi, int n, int k, long p);
UniPoly siegel_from_counts(const SCountTable& counts, int n, long p);
UniPoly siegel_series(const GramMatrix& L);
UniPoly maximal_closed_form(const std::vector<int>& gk, long p);

class InfeasibleBudget : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 32;

struct DensityOracleResult {
    int k = 0;
    int N = 0;
    BigInt count;
    Rat density;
    bool stabilized = false;
};

// Plain enumeration over all plane coordinates; reference for small N.
BigInt density_count_serial(const GramMatrix& L, int k, int N, std::uint64_t budget = kDefaultBudget);
// Orbit-reduced enumeration, OpenMP-parallel over orbit representatives.
BigInt density_count_parallel(const GramMatrix& L, int k, int N, std::uint64_t budget = kDefaultBudget);
DensityOracleResult density_oracle(const GramMatrix& L, int k, int N, std::uint64_t budget = kDefaultBudget);

bool density_decomposition_check(const GramMatrix& L, int k);

// Lattices between L and L^{(d,n)} of index p^m, L given diagonal (p odd).
std::vector<GramMatrix> intermediate_lattices(const GramMatrix& L, int d, int m);
UniPoly inductive_rhs(const GramMatrix& L, int d);

UniPoly aniso_inductive_gk(const std::vector<int>& gk, long p);
UniPoly aniso_inductive(const GramMatrix& L);
// Certified GK of an anisotropic lattice (odd p, reduced forms, or classified Z_2 shapes).
GKInvariant certified_gk(const GramMatrix& L);

bool functional_equation_check_gk(const std::vector<int>& gk, long p);
bool functional_equation_check(const GramMatrix& L);

Rat alpha_OD(int rank, int gk_total, long p);

}  // namespace gkq
