#pragma once

#include <map>
#include <vector>

#include "gkq/quadlat.hpp"

namespace gkq {

// Anisotropic lattices over Z_p keyed by certified GK.
//
// p odd: diag(u_i p^{a_i}) over unit classes {1, nonresidue}, one realization per
// tuple found.  p = 2: Jordan-shaped matrices (scaled [[1,1/2],[1/2,1]] blocks and
// odd unary entries); rank 4 uses only the classified canonical shapes.  Every
// realization found is kept, so callers can compare several lattices with equal GK.
using AnisoCatalog = std::map<std::vector<int>, std::vector<GramMatrix>>;

AnisoCatalog anisotropic_catalog(long p, int n, int max_entry, int max_total);

// A nonsquare unit mod p (p odd).
long nonresidue(long p);

}  // namespace gkq
