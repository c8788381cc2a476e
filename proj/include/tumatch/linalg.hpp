#pragma once

#include <vector>

#include "tumatch/table.hpp"

namespace tumatch {

// Small dense solves used by the ANOVA projector, the Newton steps and the
// covariance sandwiches. Desk-scale systems only; no blocking.

// Solves A x = b by Gaussian elimination with partial pivoting. Returns false
// when A is numerically singular (pivot below tiny relative threshold).
bool solve_dense(Table a, std::vector<double> b, std::vector<double>& x);

// Cholesky factorization of a symmetric positive definite matrix.
// Returns false when a non-positive pivot shows up.
bool cholesky(const Table& a, Table& lower);

// Solves A x = b with A SPD through an existing Cholesky factor.
std::vector<double> cholesky_solve(const Table& lower, const std::vector<double>& b);

// Inverse of an SPD matrix via Cholesky. Throws InvalidArgument when the
// factorization fails.
Table spd_inverse(const Table& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
std::vector<double> symmetric_eigenvalues(Table a);

// Rank of a symmetric PSD matrix by pivoted Cholesky with relative tolerance.
std::size_t psd_rank(Table a, double rel_tol = 1e-10);

} // namespace tumatch
