#pragma once

#include <vector>

#include "tumatch/basis.hpp"
#include "tumatch/solver_entropic.hpp"
#include "tumatch/types.hpp"

namespace tumatch {

// Standard cross-difference F(x',y') - F(x',y) - F(x,y') + F(x,y). Additive
// functions a(x) + b(y) are annihilated; under the entropic model
// D2 log pi = D2 Phi / sigma for every quadruple.
double cross_difference(const Table& f, std::size_t x, std::size_t y, std::size_t xp,
                        std::size_t yp);

// log pi-hat, centered by the product-weight two-way decomposition, which
// removes the additive indeterminacy; the scale sigma = 1 is imposed.
// Requires pi-hat > 0 on the support of p q; cells violating this are
// reported in the error message (use a pseudo count upstream to smooth).
Table nonparametric_surplus(const Matching& pi_hat, const Margins& m);

struct SpResult {
    std::vector<double> lambda; // weights of the projected surplus
    double fit_stat = 0.0;      // weighted residual sum of squares
};

// Weighted least squares of the nonparametric surplus on the centered basis
// tables, weights p q. A rank-deficient centered basis raises
// IdentificationError naming the rank.
SpResult sp_estimator(const Matching& pi_hat, const BasisSet& basis, const Margins& m);

struct EstimationResult {
    std::vector<double> lambda_hat;  // argmax at sigma = 1
    double i_hat = 0.0;              // maximized value = fitted mutual information
    std::vector<double> capital_lambda_hat; // lambda_hat / i_hat
    double sigma_hat = 0.0;          // 1 / i_hat
    Table fisher;                    // K x K at (lambda_hat, 1)
    Table avar;                      // sandwich F^-1 cov(phi) F^-1
    Table avar_inverse_fisher;       // the efficient candidate F^-1
    std::vector<double> std_errors;  // sqrt(diag(avar) / N)
    long n = 0;
    long iterations = 0;
    long inner_solves = 0;
    bool converged = false;
};

// Moment matching: lambda-hat maximizes lambda . C-hat - W(lambda, 1); the
// normalization sigma I = 1 turns (lambda-hat, 1) into (Lambda-hat,
// sigma-hat). C-hat on the covariogram boundary or at C-infinity raises
// IdentificationError.
EstimationResult mm_estimator(const std::vector<double>& c_hat, const BasisSet& basis,
                              const Margins& m, long n_observations,
                              double moment_tol = 1e-8, double solver_tol = 1e-12);

// Score tables d log pi / d Lambda_k = (phi^k - additive part - mean) / sigma
// evaluated at the model solution for theta.
std::vector<Table> score(const Theta& theta, const BasisSet& basis, const Margins& m,
                         double solver_tol = 1e-12);

// K x K Fisher information at theta, computed as the score covariance and
// cross-checked against the covariance-difference formula.
Table fisher_information(const Theta& theta, const BasisSet& basis, const Margins& m,
                         double solver_tol = 1e-12);

// Same, reusing an already-computed solution at (theta.lambda, theta.sigma).
Table fisher_from_solution(const EntropicSolution& sol, const BasisSet& basis,
                           const Margins& m);

// cov_pi(phi^k, phi^l) under a fitted matching.
Table basis_covariance(const Matching& pi, const BasisSet& basis);

} // namespace tumatch
