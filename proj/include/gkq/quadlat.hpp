#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gkq/exactmath.hpp"

namespace gkq {

using Mat = std::vector<std::vector<BigInt>>;
using RMat = std::vector<std::vector<Rat>>;

// Half-integral B over Z_p, stored as G = 2B (integral, even diagonal).
struct GramMatrix {
    long p = 0;
    int n = 0;
    Mat G;

    // ord_p(b_ii) and ord_p(2 b_ij)
    int ord_diag(int i) const;
    int ord_off(int i, int j) const;
    bool operator==(const GramMatrix& o) const { return p == o.p && G == o.G; }
};

GramMatrix make_gram(long p, const Mat& G);
GramMatrix diagonal_gram(long p, const std::vector<BigInt>& b);  // B = diag(b)
GramMatrix orthogonal_sum(const GramMatrix& A, const GramMatrix& B);
std::string to_json(const GramMatrix& B);
GramMatrix gram_from_json(const std::string& text);

BigInt det(const Mat& M);
Rat det(const RMat& M);
Mat identity_mat(int n);
RMat to_rat(const Mat& M);
RMat inverse(const RMat& M);
RMat mul(const RMat& A, const RMat& B);
RMat transpose(const RMat& A);

enum class Certainty { Certified, LowerBound };

struct GKInvariant {
    std::vector<int> a;
    Certainty certainty = Certainty::Certified;
    int total() const;
    bool operator==(const GKInvariant& o) const { return a == o.a; }
};
std::string to_string(const GKInvariant& g);
// lexicographic comparison
bool lex_less(const std::vector<int>& x, const std::vector<int>& y);

struct ResidueType {
    int a = 0;
    int chi = 1;
    bool operator==(const ResidueType& o) const { return a == o.a && chi == o.chi; }
    bool operator<(const ResidueType& o) const { return a != o.a ? a < o.a : chi < o.chi; }
};

struct Overlattice {
    RMat basis_change;  // columns in terms of the base basis
    int index_b = 0;
    GramMatrix gram;
};

GramMatrix transform(const GramMatrix& B, const Mat& U);
// B[U] for rational U with p-power denominators; nullopt if not half-integral.
std::optional<GramMatrix> transform_rational(const GramMatrix& B, const RMat& U);

GKInvariant best_sequence_in_S(const GramMatrix& B);
bool in_S(const GramMatrix& B, const std::vector<int>& a);
GKInvariant gk_invariant(const GramMatrix& B, std::uint64_t seed = 0);

// p odd: a diagonal Gram matrix diag(u_i p^{a_i}) equivalent over Z_p, valuations sorted.
GramMatrix odd_diagonal_form(const GramMatrix& B);

// sigma is 0-based: sigma[i] = image of i.
bool is_admissible_involution(const std::vector<int>& a, const std::vector<int>& sigma);
bool is_reduced_form(const GramMatrix& B, const std::vector<int>& a, const std::vector<int>& sigma);
std::vector<std::vector<int>> involutions(int n);

enum class Z2Case { I, II, IIIa, IIIb, IIIc };
// Detects which canonical rank-4 shape B has; nullopt if none.
std::optional<Z2Case> z2_shape_case(const GramMatrix& B);
GKInvariant gk_anisotropic_z2(const GramMatrix& B, Z2Case canonical_case);

ResidueType residue_type(const GramMatrix& B);
RMat dual_lattice(const GramMatrix& B);
std::vector<Overlattice> integral_overlattices(const GramMatrix& B);
bool is_anisotropic(const GramMatrix& B);

// Canonical integer HNF (upper triangular, column style) of the Z-span of the columns.
Mat hnf_columns(const Mat& M);

}  // namespace gkq
