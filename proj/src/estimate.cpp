#include "tumatch/estimate.hpp"

#include <cmath>
#include <string>

#include "tumatch/anova.hpp"
#include "tumatch/common.hpp"
#include "tumatch/geometry.hpp"
#include "tumatch/kernels.hpp"
#include "tumatch/linalg.hpp"
#include "tumatch/model.hpp"

namespace tumatch {

double cross_difference(const Table& f, std::size_t x, std::size_t y, std::size_t xp,
                        std::size_t yp) {
    if (x >= f.rows() || xp >= f.rows() || y >= f.cols() || yp >= f.cols())
        throw InvalidArgument("cross_difference: index out of range");
    return f(xp, yp) - f(xp, y) - f(x, yp) + f(x, y);
}

Table nonparametric_surplus(const Matching& pi_hat, const Margins& m) {
    m.require_strictly_positive("nonparametric_surplus");
    const Table& pi = pi_hat.pi;
    if (pi.rows() != m.p.size() || pi.cols() != m.q.size())
        throw InvalidArgument("nonparametric_surplus: shape mismatch");
    std::size_t empty = 0;
    for (std::size_t i = 0; i < pi.size(); ++i)
        if (!(pi.data()[i] > 0.0)) ++empty;
    if (empty > 0)
        throw InvalidArgument("nonparametric_surplus: " + std::to_string(empty) +
                              " empty cell(s) on the support; smooth with a pseudo "
                              "count or collect more data");
    Table logpi(pi.rows(), pi.cols());
    for (std::size_t i = 0; i < pi.size(); ++i)
        logpi.data()[i] = std::log(pi.data()[i]);
    return zmoi_normalize(logpi, m).phi_bar;
}

SpResult sp_estimator(const Matching& pi_hat, const BasisSet& basis, const Margins& m) {
    const std::size_t kk = basis.size();
    if (kk == 0) throw InvalidArgument("sp_estimator: empty basis");
    const Table phi_hat = nonparametric_surplus(pi_hat, m);

    // center the basis the same way, then weighted least squares under p q
    std::vector<Table> centered;
    centered.reserve(kk);
    for (std::size_t k = 0; k < kk; ++k)
        centered.push_back(zmoi_normalize(basis[k].values, m).phi_bar);

    const std::size_t tx = m.p.size(), ty = m.q.size();
    Table weights(tx, ty);
    for (std::size_t i = 0; i < tx; ++i)
        for (std::size_t j = 0; j < ty; ++j) weights(i, j) = m.p[i] * m.q[j];

    const auto wdot = [&](const Table& a, const Table& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += weights.data()[i] * a.data()[i] * b.data()[i];
        return s;
    };

    Table gram(kk, kk);
    std::vector<double> rhs(kk);
    for (std::size_t k = 0; k < kk; ++k) {
        for (std::size_t l = 0; l <= k; ++l)
            gram(k, l) = gram(l, k) = wdot(centered[k], centered[l]);
        rhs[k] = wdot(centered[k], phi_hat);
    }

    Table lower;
    if (!cholesky(gram, lower)) {
        const std::size_t rank = psd_rank(gram);
        throw IdentificationError(
            "sp_estimator: centered basis tables are collinear (rank " +
            std::to_string(rank) + " of " + std::to_string(kk) + ")");
    }

    SpResult out;
    out.lambda = cholesky_solve(lower, rhs);
    Table resid = phi_hat;
    for (std::size_t k = 0; k < kk; ++k)
        for (std::size_t i = 0; i < resid.size(); ++i)
            resid.data()[i] -= out.lambda[k] * centered[k].data()[i];
    out.fit_stat = wdot(resid, resid);
    return out;
}

Table basis_covariance(const Matching& pi, const BasisSet& basis) {
    const std::size_t kk = basis.size();
    const std::vector<double> mean = covariations(pi, basis);
    Table cov(kk, kk);
    for (std::size_t k = 0; k < kk; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
            double s = 0.0;
            const Table& fk = basis[k].values;
            const Table& fl = basis[l].values;
            for (std::size_t i = 0; i < fk.size(); ++i)
                s += pi.pi.data()[i] * (fk.data()[i] - mean[k]) *
                     (fl.data()[i] - mean[l]);
            cov(k, l) = cov(l, k) = s;
        }
    return cov;
}

Table fisher_from_solution(const EntropicSolution& sol, const BasisSet& basis,
                           const Margins& m) {
    const std::size_t kk = basis.size();
    if (basis.rows() != m.p.size() || basis.cols() != m.q.size())
        throw InvalidArgument("fisher_from_solution: basis shape mismatch");
    const double sigma = sol.sigma;
    const Table& pi = sol.pi.pi;

    std::vector<Table> residuals;
    std::vector<Table> additive;
    residuals.reserve(kk);
    additive.reserve(kk);
    for (std::size_t k = 0; k < kk; ++k) {
        const AnovaDecomposition dec = anova_project(basis[k].values, sol.pi);
        residuals.push_back(dec.residual);
        additive.push_back(dec.additive());
    }

    // score covariance
    Table fisher(kk, kk);
    for (std::size_t k = 0; k < kk; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < pi.size(); ++i)
                s += pi.data()[i] * residuals[k].data()[i] * residuals[l].data()[i];
            fisher(k, l) = fisher(l, k) = s / (sigma * sigma);
        }

    // covariance-difference route as a consistency guard
    const Table cov_phi = basis_covariance(sol.pi, basis);
    double worst = 0.0;
    for (std::size_t k = 0; k < kk; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
            double cov_add = 0.0;
            for (std::size_t i = 0; i < pi.size(); ++i)
                cov_add += pi.data()[i] * additive[k].data()[i] * additive[l].data()[i];
            const double alt = (cov_phi(k, l) - cov_add) / (sigma * sigma);
            worst = std::max(worst, std::abs(alt - fisher(k, l)));
        }
    if (worst > 1e-6)
        throw ConvergenceError(
            "fisher_from_solution: score-covariance and covariance-difference "
            "routes disagree by " +
            std::to_string(worst));
    return fisher;
}

std::vector<Table> score(const Theta& theta, const BasisSet& basis, const Margins& m,
                         double solver_tol) {
    theta.validate();
    if (!(theta.sigma > 0.0)) throw InvalidArgument("score: sigma must be positive");
    const Table phi = build_surplus(basis, theta.lambda);
    IpfpOptions opts;
    opts.tol = solver_tol;
    const EntropicSolution sol = solve_ipfp(phi, m, theta.sigma, opts);
    if (!sol.converged) throw ConvergenceError("score: IPFP did not converge");

    std::vector<Table> out;
    out.reserve(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const AnovaDecomposition dec = anova_project(basis[k].values, sol.pi);
        Table s = dec.residual;
        for (std::size_t i = 0; i < s.size(); ++i) s.data()[i] /= theta.sigma;
        out.push_back(std::move(s));
    }
    return out;
}

Table fisher_information(const Theta& theta, const BasisSet& basis, const Margins& m,
                         double solver_tol) {
    theta.validate();
    if (!(theta.sigma > 0.0))
        throw InvalidArgument("fisher_information: sigma must be positive");
    const Table phi = build_surplus(basis, theta.lambda);
    IpfpOptions opts;
    opts.tol = solver_tol;
    const EntropicSolution sol = solve_ipfp(phi, m, theta.sigma, opts);
    if (!sol.converged)
        throw ConvergenceError("fisher_information: IPFP did not converge");
    return fisher_from_solution(sol, basis, m);
}

EstimationResult mm_estimator(const std::vector<double>& c_hat, const BasisSet& basis,
                              const Margins& m, long n_observations, double moment_tol,
                              double solver_tol) {
    if (n_observations < 1) throw InvalidArgument("mm_estimator: need N >= 1");
    const std::size_t kk = basis.size();

    const ImplicitMiResult fit =
        implicit_mutual_information(c_hat, basis, m, moment_tol, solver_tol);

    EstimationResult out;
    out.lambda_hat = fit.lambda_hat;
    out.i_hat = fit.i_r;
    out.iterations = fit.iterations;
    out.inner_solves = fit.inner_solves;
    out.n = n_observations;
    out.converged = true;

    if (!(out.i_hat > 0.0))
        throw IdentificationError(
            "mm_estimator: zero mutual information; sigma is unidentified at the "
            "random matching");

    out.sigma_hat = 1.0 / out.i_hat;
    out.capital_lambda_hat.resize(kk);
    for (std::size_t k = 0; k < kk; ++k)
        out.capital_lambda_hat[k] = out.lambda_hat[k] / out.i_hat;

    // one more solve at the optimum for the information quantities
    const Table phi = build_surplus(basis, out.lambda_hat);
    IpfpOptions opts;
    opts.tol = solver_tol;
    const EntropicSolution sol = solve_ipfp(phi, m, 1.0, opts);
    if (!sol.converged) throw ConvergenceError("mm_estimator: final solve stalled");

    out.fisher = fisher_from_solution(sol, basis, m);
    const Table cov_phi = basis_covariance(sol.pi, basis);
    const Table fisher_inv = spd_inverse(out.fisher);

    // sandwich F^-1 cov F^-1
    Table tmp(kk, kk), sand(kk, kk);
    for (std::size_t a = 0; a < kk; ++a)
        for (std::size_t b = 0; b < kk; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < kk; ++r) s += fisher_inv(a, r) * cov_phi(r, b);
            tmp(a, b) = s;
        }
    for (std::size_t a = 0; a < kk; ++a)
        for (std::size_t b = 0; b < kk; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < kk; ++r) s += tmp(a, r) * fisher_inv(r, b);
            sand(a, b) = s;
        }
    out.avar = sand;
    out.avar_inverse_fisher = fisher_inv;
    out.std_errors.resize(kk);
    for (std::size_t k = 0; k < kk; ++k)
        out.std_errors[k] =
            std::sqrt(out.avar(k, k) / static_cast<double>(n_observations));
    return out;
}

} // namespace tumatch
