#pragma once

#include <optional>
#include <vector>

#include "gkq/exactmath.hpp"

namespace gkq {

BigInt t_sum(int a1, int a2, long p);
BigInt fprime_rank1_at1(int a, long p);

// GK of an anisotropic ternary lattice: nondecreasing, exactly two entries of equal parity.
bool is_aniso_rank3_gk(const std::vector<int>& a);
BigInt alpha_p(int a1, int a2, int a3, long p);
// -2p/(p-1)^2 * F'_L(1/p^2) / alpha(L, O_D), with F_L from the anisotropic recursion
Rat alpha_p_from_siegel(int a1, int a2, int a3, long p);

bool identity_t_sum(int a1, int a2, long p);
bool identity_alpha_p(int a1, int a2, int a3, long p);

// Derivative recursions; each returns true when not applicable (maximal input).
bool derivative_check_rank3(const std::vector<int>& gk, long p);
bool derivative_check_rank2(const std::vector<int>& gk, long p);
bool derivative_check_rank1(int a, long p);
bool t_recursion_check(int a1, int a2, long p);

BigInt ordinary_multiplicity(long m1, long m2, long beta, long p);

enum class QuasiCase { One = 1, Two = 2, Three = 3, Four = 4 };

struct QuasiCanonicalResult {
    QuasiCase which;
    int a1, a2, b1, b2, r;  // after normalization
    BigInt sum;
    BigInt expected;
    bool ok() const { return sum == expected; }
};
// r defaults to min(a1 + b2, a2 + b1)
QuasiCanonicalResult quasicanonical_sum(int a1, int a2, int b1, int b2, long p, std::optional<int> r = std::nullopt);
bool quasicanonical_sum_check(int a1, int a2, int b1, int b2, long p);

BigInt special_cycle_e(const std::vector<int>& gk, long p);
bool special_cycle_check(const std::vector<int>& gk, long p);

}  // namespace gkq
