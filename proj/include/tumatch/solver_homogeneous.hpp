#pragma once

#include <vector>

#include "tumatch/types.hpp"

namespace tumatch {

// Optimal pair of the transportation linear program
//   max sum pi Phi  over pi in M(P,Q)
// with dual prices u0, v0 satisfying u0(x) + v0(y) >= Phi(x,y) everywhere and
// equality on the support of pi0. Duals normalized by E_p[u0] = 0.
struct HomogeneousSolution {
    Matching pi0;
    std::vector<double> u0;
    std::vector<double> v0;
    double w0 = 0.0;
    // false when a zero-reduced-cost nonbasic cell was detected at the
    // optimum (multiple optima possible)
    bool is_unique_hint = true;
    long pivots = 0;
};

// Transportation simplex on the spanning-tree basis; entering arc chosen by
// lowest flat index among improving cells, leaving arc by lowest index among
// ratio-test ties (Bland's rule, deterministic and cycle-free).
HomogeneousSolution solve_lp(const Table& phi, const Margins& m);

struct AnnealRow {
    double sigma;
    double objective; // entropic value sum(pi Phi) - sigma I(pi)
    double gap;       // w0 - objective (nonnegative)
};

// Entropic objective along a decreasing sigma grid, warm-starting each solve
// from the previous potentials; the gap to the LP value shrinks to zero.
std::vector<AnnealRow> anneal_check(const Table& phi, const Margins& m,
                                    const std::vector<double>& sigma_grid,
                                    double tol = 1e-10, long max_iter = 100000);

} // namespace tumatch
