#include "tumatch/solver_entropic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tumatch/common.hpp"
#include "tumatch/kernels.hpp"
#include "tumatch/model.hpp"

namespace tumatch {
namespace {

void check_inputs(const Table& phi, const Margins& m, double sigma) {
    m.require_strictly_positive("solve_ipfp");
    if (phi.rows() != m.p.size() || phi.cols() != m.q.size())
        throw InvalidArgument("solve_ipfp: surplus shape does not fit margins");
    if (!(sigma > 0.0))
        throw InvalidArgument("solve_ipfp: sigma must be positive (use solve_lp for "
                              "the homogeneous limit)");
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (!std::isfinite(phi.data()[i]))
            throw InvalidArgument("solve_ipfp: non-finite surplus entry");
}

double surplus_range(const Table& phi) {
    double lo = phi.data()[0], hi = phi.data()[0];
    for (std::size_t i = 1; i < phi.size(); ++i) {
        lo = std::min(lo, phi.data()[i]);
        hi = std::max(hi, phi.data()[i]);
    }
    return hi - lo;
}

// Scaled potentials: pi(i,j) = exp(lp_i + lq_j + phi_ij/sigma - su_i - sv_j);
// u = sigma * su, v = sigma * sv up to the zero-mean shift.
struct LogState {
    std::vector<double> su, sv;
};

// One run of log-domain IPFP at fixed sigma. Returns the achieved column
// residual; rows are exact after the final u-update.
long iterate_log(const Table& a_rows, const Table& b_cols, const Margins& m,
                 LogState& st, double tol, long max_iter, double& residual) {
    const std::size_t tx = m.p.size(), ty = m.q.size();
    const auto& k = kernels::active();
    std::vector<double> sv_next(ty);

    // initial half-step: fit columns from the incoming u
    for (std::size_t j = 0; j < ty; ++j)
        st.sv[j] = k.logsumexp_shifted(b_cols.row(j), st.su.data(), tx);

    long it = 0;
    residual = std::numeric_limits<double>::infinity();
    while (it < max_iter) {
        ++it;
        for (std::size_t i = 0; i < tx; ++i)
            st.su[i] = k.logsumexp_shifted(a_rows.row(i), st.sv.data(), ty);
        double res = 0.0;
        for (std::size_t j = 0; j < ty; ++j) {
            sv_next[j] = k.logsumexp_shifted(b_cols.row(j), st.su.data(), tx);
            res = std::max(res, m.q[j] * std::abs(std::expm1(sv_next[j] - st.sv[j])));
        }
        residual = res;
        if (res <= tol) break;
        std::swap(st.sv, sv_next);
    }
    return it;
}

// Literal scaling-factor iteration on (a, b) with
// pi = p q a exp(Phi/sigma) b; only safe for moderate Phi/sigma.
long iterate_multiplicative(const Table& phi, const Margins& m, double sigma,
                            LogState& st, double tol, long max_iter,
                            double& residual) {
    const std::size_t tx = m.p.size(), ty = m.q.size();
    Table psi(tx, ty);
    for (std::size_t i = 0; i < tx; ++i)
        for (std::size_t j = 0; j < ty; ++j) psi(i, j) = std::exp(phi(i, j) / sigma);

    std::vector<double> a(tx), b(ty, 1.0), b_next(ty);
    for (std::size_t i = 0; i < tx; ++i) a[i] = std::exp(-st.su[i]);

    const auto fit_b = [&](std::vector<double>& dst) {
        for (std::size_t j = 0; j < ty; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < tx; ++i) s += m.p[i] * psi(i, j) * a[i];
            dst[j] = 1.0 / s;
        }
    };

    fit_b(b);
    long it = 0;
    residual = std::numeric_limits<double>::infinity();
    while (it < max_iter) {
        ++it;
        for (std::size_t i = 0; i < tx; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < ty; ++j) s += m.q[j] * psi(i, j) * b[j];
            a[i] = 1.0 / s;
        }
        fit_b(b_next);
        double res = 0.0;
        for (std::size_t j = 0; j < ty; ++j)
            res = std::max(res, m.q[j] * std::abs(b[j] / b_next[j] - 1.0));
        residual = res;
        if (res <= tol) break;
        std::swap(b, b_next);
    }
    for (std::size_t i = 0; i < tx; ++i) st.su[i] = -std::log(a[i]);
    for (std::size_t j = 0; j < ty; ++j) st.sv[j] = -std::log(b[j]);
    return it;
}

} // namespace

EntropicSolution solve_ipfp(const Table& phi, const Margins& m, double sigma,
                            const IpfpOptions& opts) {
    check_inputs(phi, m, sigma);
    if (!(opts.tol > 0.0)) throw InvalidArgument("solve_ipfp: tol must be positive");
    if (opts.max_iter < 1) throw InvalidArgument("solve_ipfp: max_iter must be positive");
    const std::size_t tx = m.p.size(), ty = m.q.size();
    const auto& k = kernels::active();

    std::vector<double> lp(tx), lq(ty);
    for (std::size_t i = 0; i < tx; ++i) lp[i] = std::log(m.p[i]);
    for (std::size_t j = 0; j < ty; ++j) lq[j] = std::log(m.q[j]);

    LogState st;
    st.su.assign(tx, 0.0);
    st.sv.assign(ty, 0.0);
    if (opts.start) {
        if (opts.start->first.size() != tx || opts.start->second.size() != ty)
            throw InvalidArgument("solve_ipfp: warm start has wrong shape");
        for (std::size_t i = 0; i < tx; ++i) st.su[i] = opts.start->first[i] / sigma;
        for (std::size_t j = 0; j < ty; ++j) st.sv[j] = opts.start->second[j] / sigma;
    } else if (opts.init == IpfpOptions::Init::LogP) {
        for (std::size_t i = 0; i < tx; ++i) st.su[i] = -lp[i];
    }

    EntropicSolution sol;
    sol.sigma = sigma;
    const double range = surplus_range(phi);
    sol.small_sigma_warning = sigma < 0.01 * range;

    std::vector<double> sigma_ladder{sigma};
    if (opts.auto_anneal && sol.small_sigma_warning) {
        double s = 0.02 * range;
        while (s > sigma * 2.0) {
            sigma_ladder.push_back(s);
            s *= 0.5;
        }
        std::reverse(sigma_ladder.begin(), sigma_ladder.end()); // decreasing
    }

    long total_iters = 0;
    double residual = 0.0;
    for (std::size_t step = 0; step < sigma_ladder.size(); ++step) {
        const double sig = sigma_ladder[step];
        if (step > 0) {
            // rescale raw potentials sigma_prev*s to the new sigma
            const double ratio = sigma_ladder[step - 1] / sig;
            for (double& x : st.su) x *= ratio;
            for (double& x : st.sv) x *= ratio;
        }
        const bool last = (step + 1 == sigma_ladder.size());
        Table a_rows(tx, ty), b_cols(ty, tx);
        for (std::size_t i = 0; i < tx; ++i)
            for (std::size_t j = 0; j < ty; ++j) {
                a_rows(i, j) = phi(i, j) / sig + lq[j];
                b_cols(j, i) = phi(i, j) / sig + lp[i];
            }
        const double step_tol = last ? opts.tol : std::max(opts.tol, 1e-8);
        if (opts.method == IpfpOptions::Method::Multiplicative && last &&
            sigma_ladder.size() == 1) {
            total_iters += iterate_multiplicative(phi, m, sig, st, step_tol,
                                                  opts.max_iter, residual);
        } else {
            total_iters += iterate_log(a_rows, b_cols, m, st, step_tol,
                                       opts.max_iter - total_iters, residual);
        }
    }

    sol.iterations = total_iters;
    sol.converged = residual <= opts.tol;

    // raw potentials -> zero-mean (u, v) and the constant c
    std::vector<double> u_raw(tx), v_raw(ty);
    for (std::size_t i = 0; i < tx; ++i) u_raw[i] = sigma * st.su[i];
    for (std::size_t j = 0; j < ty; ++j) v_raw[j] = sigma * st.sv[j];
    const double ubar = k.dot(u_raw.data(), m.p.data(), tx);
    const double vbar = k.dot(v_raw.data(), m.q.data(), ty);
    sol.u.resize(tx);
    sol.v.resize(ty);
    for (std::size_t i = 0; i < tx; ++i) sol.u[i] = u_raw[i] - ubar;
    for (std::size_t j = 0; j < ty; ++j) sol.v[j] = v_raw[j] - vbar;
    sol.c = ubar + vbar;

    // materialize pi(i,j) = exp(lp_i + lq_j + phi_ij/sigma - su_i - sv_j)
    sol.pi.pi = Table(tx, ty);
    {
        Table a_rows(tx, ty);
        for (std::size_t i = 0; i < tx; ++i)
            for (std::size_t j = 0; j < ty; ++j)
                a_rows(i, j) = phi(i, j) / sigma + lq[j];
        for (std::size_t i = 0; i < tx; ++i)
            k.exp_shifted(a_rows.row(i), st.sv.data(), lp[i] - st.su[i],
                          sol.pi.pi.row(i), ty);
    }

    sol.marginal_residual = sol.pi.margin_residual(m);
    sol.objective = kernels::active().dot(sol.pi.pi.data(), phi.data(), phi.size()) -
                    sigma * mutual_information(sol.pi, m);
    return sol;
}

double welfare(const EntropicSolution& sol, const Margins& m,
               std::pair<double, double> split) {
    const auto [s1, s2] = split;
    if (s1 < 0.0 || s2 < 0.0 ||
        std::abs(s1 + s2 - sol.sigma) > 1e-12 * std::max(1.0, sol.sigma))
        throw InvalidArgument("welfare: split does not add up to sigma");
    return sol.objective + s1 * entropy(m.q) + s2 * entropy(m.p);
}

std::pair<Table, Table> potentials_to_uv(const EntropicSolution& sol,
                                         const Margins& m,
                                         std::pair<double, double> split) {
    const auto [s1, s2] = split;
    if (!(s1 > 0.0) || !(s2 > 0.0))
        throw InvalidArgument("potentials_to_uv: both split components must be positive");
    if (std::abs(s1 + s2 - sol.sigma) > 1e-12 * std::max(1.0, sol.sigma))
        throw InvalidArgument("potentials_to_uv: split does not add up to sigma");

    const std::size_t tx = m.p.size(), ty = m.q.size();
    const Table& pi = sol.pi.pi;
    // The pair (U, V) is pinned up to one scalar; split -c proportionally.
    const double c1 = -sol.c * s1 / sol.sigma;
    const double c2 = -sol.c * s2 / sol.sigma;
    Table u_t(tx, ty), v_t(tx, ty);
    for (std::size_t i = 0; i < tx; ++i)
        for (std::size_t j = 0; j < ty; ++j) {
            u_t(i, j) = s1 * std::log(pi(i, j) / m.p[i]) - s2 * std::log(m.p[i]) +
                        sol.u[i] - c1;
            v_t(i, j) = s2 * std::log(pi(i, j) / m.q[j]) - s1 * std::log(m.q[j]) +
                        sol.v[j] - c2;
        }
    return {std::move(u_t), std::move(v_t)};
}

double primal_welfare(const Table& u_table, const Table& v_table, const Margins& m,
                      std::pair<double, double> split) {
    const auto [s1, s2] = split;
    if (!(s1 > 0.0) || !(s2 > 0.0))
        throw InvalidArgument("primal_welfare: split components must be positive");
    const std::size_t tx = m.p.size(), ty = m.q.size();
    if (u_table.rows() != tx || u_table.cols() != ty || !u_table.same_shape(v_table))
        throw InvalidArgument("primal_welfare: shape mismatch");
    const auto& k = kernels::active();
    double total = 0.0;
    std::vector<double> buf(std::max(tx, ty));
    for (std::size_t i = 0; i < tx; ++i) {
        for (std::size_t j = 0; j < ty; ++j) buf[j] = u_table(i, j) / s1;
        total += s1 * m.p[i] * k.logsumexp(buf.data(), ty);
    }
    for (std::size_t j = 0; j < ty; ++j) {
        for (std::size_t i = 0; i < tx; ++i) buf[i] = v_table(i, j) / s2;
        total += s2 * m.q[j] * k.logsumexp(buf.data(), tx);
    }
    return total;
}

} // namespace tumatch
