#pragma once

#include <vector>

#include "tumatch/basis.hpp"
#include "tumatch/types.hpp"

namespace tumatch {

// One support point of the covariogram: the homogeneous optimum in direction
// lambda, its covariations and the LP value (the support function of F_c).
struct CovariogramPoint {
    std::vector<double> direction;
    std::vector<double> c0;
    double w0 = 0.0;
    bool unique_hint = true;
};

struct CovariogramTrace {
    std::vector<CovariogramPoint> points;
};

CovariogramTrace trace_covariogram(const BasisSet& basis, const Margins& m,
                                   const std::vector<std::vector<double>>& directions);

// n evenly spaced unit directions on the circle (K = 2 only).
std::vector<std::vector<double>> circle_directions(std::size_t n = 360);

// Covariations of the product matching (the sigma -> infinity endpoint).
std::vector<double> c_infinity(const BasisSet& basis, const Margins& m);

struct SummaryPathPoint {
    double sigma = 0.0;
    std::vector<double> covariations;
    double mutual_information = 0.0;
    double objective = 0.0;
};

struct SummaryPath {
    std::vector<double> lambda;
    std::vector<SummaryPathPoint> points;
};

// Entropic solve per grid point at fixed lambda; the summary walks from the
// covariogram boundary toward C_infinity as sigma grows.
SummaryPath summary_path(const BasisSet& basis, const Margins& m,
                         const std::vector<double>& lambda,
                         const std::vector<double>& sigma_grid,
                         double tol = 1e-10, long max_iter = 100000);

struct ImplicitMiResult {
    double i_r = 0.0;                // value of the transform
    std::vector<double> lambda_hat;  // argmax
    long iterations = 0;
    long inner_solves = 0;
};

// I_r(C) = sup_lambda { lambda . C - W(lambda, 1) } where W(lambda, 1) is the
// entropic objective value at sigma = 1. Newton ascent with exact gradient
// C - C(lambda, 1) and Hessian -Fisher. Diverging lambda signals a boundary
// or infeasible C and raises IdentificationError.
ImplicitMiResult implicit_mutual_information(const std::vector<double>& c,
                                             const BasisSet& basis, const Margins& m,
                                             double tol = 1e-8,
                                             double solver_tol = 1e-12,
                                             long max_iter = 500);

} // namespace tumatch
