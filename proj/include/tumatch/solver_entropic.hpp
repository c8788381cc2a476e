#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tumatch/types.hpp"

namespace tumatch {

// Solution of the coupled system
//   pi(x,y) = p(x) q(y) exp((Phi(x,y) - u(x) - v(y) - c) / sigma),
//   pi in M(P,Q),
// normalized by E_p[u] = E_q[v] = 0. pi is the unique maximizer of
// sum pi Phi - sigma I(pi) over M(P,Q); `objective` is that maximal value,
// which also equals c.
struct EntropicSolution {
    Matching pi;
    std::vector<double> u;
    std::vector<double> v;
    double c = 0.0;
    double sigma = 0.0;
    long iterations = 0;
    double marginal_residual = 0.0;
    double objective = 0.0;
    bool converged = false;
    bool small_sigma_warning = false;
};

struct IpfpOptions {
    double tol = 1e-10;
    long max_iter = 100000;
    enum class Method {
        LogDomain,      // iterate on (u, v) with log-sum-exp updates
        Multiplicative, // literal scaling-factor form, for cross-validation
    } method = Method::LogDomain;
    enum class Init { Zero, LogP } init = Init::Zero;
    // warm start: raw potentials (u, v) from a previous solve
    std::optional<std::pair<std::vector<double>, std::vector<double>>> start;
    // solve a decreasing sigma ladder down to the target when sigma is small
    // relative to the surplus range
    bool auto_anneal = false;
};

// Alternating marginal fitting in the log domain (Gauss-Seidel order: v from
// the latest u, then u from the new v) until the sup-norm marginal violation
// is at most tol. Requires sigma > 0 and strictly positive margins.
EntropicSolution solve_ipfp(const Table& phi, const Margins& m, double sigma,
                            const IpfpOptions& opts = {});

// W = objective + sigma1 S(Q) + sigma2 S(P).
double welfare(const EntropicSolution& sol, const Margins& m,
               std::pair<double, double> split);

// Recovers the per-match utility split U + V = Phi from the solved
// potentials; the single free constant is fixed proportionally to the split.
std::pair<Table, Table> potentials_to_uv(const EntropicSolution& sol,
                                         const Margins& m,
                                         std::pair<double, double> split);

// Value of the smoothed dual program at candidate (U, V):
//   sigma1 E_P log sum_y exp(U/sigma1) + sigma2 E_Q log sum_x exp(V/sigma2).
double primal_welfare(const Table& u_table, const Table& v_table, const Margins& m,
                      std::pair<double, double> split);

} // namespace tumatch
