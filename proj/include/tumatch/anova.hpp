#pragma once

#include <vector>

#include "tumatch/types.hpp"

namespace tumatch {

// Two-way decomposition of h under the weighting matching pi:
//   h(x,y) = mean + f(x) + g(y) + residual(x,y)
// with E_p f = E_q g = 0 and both conditional means of the residual zero.
// f + g is the best additive predictor of h - mean in L2(pi).
struct AnovaDecomposition {
    double mean = 0.0;
    std::vector<double> f;
    std::vector<double> g;
    Table residual;
    Matching weights;
    bool converged = true;
    int iterations = 0;

    // f(x) + g(y) as a table (the additive part without the mean)
    Table additive() const;
    double conditional_mean_violation() const;
};

// Solves the normal equations with the two zero-mean constraints imposed via
// one multiplier per side; falls back to backfitting sweeps when the system
// is near-singular.
AnovaDecomposition anova_project(const Table& h, const Matching& pi);

} // namespace tumatch
