#include "tumatch/geometry.hpp"

#include <cmath>
#include <string>

#include "tumatch/common.hpp"
#include "tumatch/estimate.hpp"
#include "tumatch/linalg.hpp"
#include "tumatch/model.hpp"
#include "tumatch/solver_entropic.hpp"
#include "tumatch/solver_homogeneous.hpp"

namespace tumatch {

CovariogramTrace trace_covariogram(const BasisSet& basis, const Margins& m,
                                   const std::vector<std::vector<double>>& directions) {
    if (basis.size() == 0) throw InvalidArgument("trace_covariogram: empty basis");
    if (directions.empty()) throw InvalidArgument("trace_covariogram: no directions");
    CovariogramTrace trace;
    trace.points.reserve(directions.size());
    for (const auto& dir : directions) {
        if (dir.size() != basis.size())
            throw InvalidArgument("trace_covariogram: direction has wrong length");
        const Table phi = build_surplus(basis, dir);
        const HomogeneousSolution lp = solve_lp(phi, m);
        CovariogramPoint pt;
        pt.direction = dir;
        pt.c0 = covariations(lp.pi0, basis);
        pt.w0 = lp.w0;
        pt.unique_hint = lp.is_unique_hint;
        trace.points.push_back(std::move(pt));
    }
    return trace;
}

std::vector<std::vector<double>> circle_directions(std::size_t n) {
    if (n == 0) throw InvalidArgument("circle_directions: need at least one direction");
    std::vector<std::vector<double>> dirs;
    dirs.reserve(n);
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = two_pi * static_cast<double>(k) / static_cast<double>(n);
        dirs.push_back({std::cos(a), std::sin(a)});
    }
    return dirs;
}

std::vector<double> c_infinity(const BasisSet& basis, const Margins& m) {
    return covariations(product_matching(m), basis);
}

SummaryPath summary_path(const BasisSet& basis, const Margins& m,
                         const std::vector<double>& lambda,
                         const std::vector<double>& sigma_grid, double tol,
                         long max_iter) {
    if (sigma_grid.empty()) throw InvalidArgument("summary_path: empty sigma grid");
    for (std::size_t k = 0; k < sigma_grid.size(); ++k) {
        if (!(sigma_grid[k] > 0.0))
            throw InvalidArgument("summary_path: sigma grid must be positive");
        if (k > 0 && sigma_grid[k] <= sigma_grid[k - 1])
            throw InvalidArgument("summary_path: sigma grid must be sorted ascending");
    }
    const Table phi = build_surplus(basis, lambda);
    SummaryPath path;
    path.lambda = lambda;
    IpfpOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    for (const double sigma : sigma_grid) {
        const EntropicSolution sol = solve_ipfp(phi, m, sigma, opts);
        if (!sol.converged)
            throw ConvergenceError("summary_path: IPFP did not converge at sigma " +
                                   std::to_string(sigma));
        SummaryPathPoint pt;
        pt.sigma = sigma;
        pt.covariations = covariations(sol.pi, basis);
        pt.mutual_information = mutual_information(sol.pi, m);
        pt.objective = sol.objective;
        path.points.push_back(std::move(pt));
        opts.start = std::make_pair(sol.u, sol.v);
    }
    return path;
}

ImplicitMiResult implicit_mutual_information(const std::vector<double>& c,
                                             const BasisSet& basis, const Margins& m,
                                             double tol, double solver_tol,
                                             long max_iter) {
    const std::size_t kk = basis.size();
    if (c.size() != kk)
        throw InvalidArgument("implicit_mutual_information: covariation length mismatch");
    m.require_strictly_positive("implicit_mutual_information");

    IpfpOptions sopts;
    sopts.tol = solver_tol;

    ImplicitMiResult out;
    std::vector<double> lambda(kk, 0.0);

    const auto evaluate = [&](const std::vector<double>& lam, EntropicSolution& sol) {
        const Table phi = build_surplus(basis, lam);
        sol = solve_ipfp(phi, m, 1.0, sopts);
        ++out.inner_solves;
        if (!sol.converged)
            throw ConvergenceError("implicit_mutual_information: inner solve stalled");
        double val = -sol.objective;
        for (std::size_t k = 0; k < kk; ++k) val += lam[k] * c[k];
        return val;
    };

    EntropicSolution sol;
    double value = evaluate(lambda, sol);
    for (long it = 1; it <= max_iter; ++it) {
        out.iterations = it;
        const std::vector<double> c_model = covariations(sol.pi, basis);
        std::vector<double> grad(kk);
        double gnorm = 0.0, lnorm = 0.0;
        for (std::size_t k = 0; k < kk; ++k) {
            grad[k] = c[k] - c_model[k];
            gnorm = std::max(gnorm, std::abs(grad[k]));
            lnorm = std::max(lnorm, std::abs(lambda[k]));
        }
        if (gnorm <= tol) {
            out.lambda_hat = lambda;
            out.i_r = value;
            return out;
        }
        if (lnorm > 1e6)
            throw IdentificationError(
                "implicit_mutual_information: covariation not strictly feasible "
                "(lambda diverged)");

        const Table fisher = fisher_from_solution(sol, basis, m);
        Table lower;
        std::vector<double> step;
        if (cholesky(fisher, lower)) {
            step = cholesky_solve(lower, grad);
        } else {
            throw IdentificationError(
                "implicit_mutual_information: singular Fisher information "
                "(collinear basis after centering)");
        }

        // backtracking line search on the concave objective
        double t = 1.0;
        double slope = 0.0;
        for (std::size_t k = 0; k < kk; ++k) slope += grad[k] * step[k];
        bool moved = false;
        for (int half = 0; half < 60; ++half) {
            std::vector<double> cand(kk);
            for (std::size_t k = 0; k < kk; ++k) cand[k] = lambda[k] + t * step[k];
            EntropicSolution cand_sol;
            const double cand_val = evaluate(cand, cand_sol);
            if (cand_val >= value + 1e-4 * t * slope) {
                lambda = std::move(cand);
                sol = std::move(cand_sol);
                value = cand_val;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved)
            throw ConvergenceError(
                "implicit_mutual_information: line search failed to make progress");
    }
    throw ConvergenceError("implicit_mutual_information: Newton iteration cap reached");
}

} // namespace tumatch
