#include "tumatch/anova.hpp"

#include <cmath>

#include "tumatch/common.hpp"
#include "tumatch/kernels.hpp"
#include "tumatch/linalg.hpp"

namespace tumatch {
namespace {

struct Weights {
    std::vector<double> p, q; // margins of pi
};

Weights margins_of(const Table& pi) {
    Weights w;
    w.p.assign(pi.rows(), 0.0);
    w.q.assign(pi.cols(), 0.0);
    for (std::size_t i = 0; i < pi.rows(); ++i)
        for (std::size_t j = 0; j < pi.cols(); ++j) {
            w.p[i] += pi(i, j);
            w.q[j] += pi(i, j);
        }
    for (double v : w.p)
        if (v <= 0.0)
            throw InvalidArgument("anova_project: weighting matching has a zero-mass row");
    for (double v : w.q)
        if (v <= 0.0)
            throw InvalidArgument("anova_project: weighting matching has a zero-mass column");
    return w;
}

void backfit(const Table& pi, const Weights& w, const Table& centered,
             std::vector<double>& f, std::vector<double>& g, bool& converged,
             int& iterations) {
    const std::size_t tx = pi.rows(), ty = pi.cols();
    f.assign(tx, 0.0);
    g.assign(ty, 0.0);
    const int max_sweeps = 20000;
    converged = false;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double delta = 0.0;
        for (std::size_t i = 0; i < tx; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < ty; ++j) s += pi(i, j) * (centered(i, j) - g[j]);
            s /= w.p[i];
            delta = std::max(delta, std::abs(s - f[i]));
            f[i] = s;
        }
        for (std::size_t j = 0; j < ty; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < tx; ++i) s += pi(i, j) * (centered(i, j) - f[i]);
            s /= w.q[j];
            delta = std::max(delta, std::abs(s - g[j]));
            g[j] = s;
        }
        // recenter: shift the constant into f's side then remove it entirely
        const double fbar = kernels::active().dot(f.data(), w.p.data(), tx);
        const double gbar = kernels::active().dot(g.data(), w.q.data(), ty);
        for (double& v : f) v -= fbar;
        for (double& v : g) v -= gbar;
        iterations = sweep;
        if (delta < 1e-13) {
            converged = true;
            break;
        }
    }
}

} // namespace

Table AnovaDecomposition::additive() const {
    Table t(f.size(), g.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) t(i, j) = f[i] + g[j];
    return t;
}

double AnovaDecomposition::conditional_mean_violation() const {
    const Table& pi = weights.pi;
    double worst = 0.0;
    for (std::size_t i = 0; i < pi.rows(); ++i) {
        double s = 0.0, mass = 0.0;
        for (std::size_t j = 0; j < pi.cols(); ++j) {
            s += pi(i, j) * residual(i, j);
            mass += pi(i, j);
        }
        worst = std::max(worst, std::abs(s / mass));
    }
    for (std::size_t j = 0; j < pi.cols(); ++j) {
        double s = 0.0, mass = 0.0;
        for (std::size_t i = 0; i < pi.rows(); ++i) {
            s += pi(i, j) * residual(i, j);
            mass += pi(i, j);
        }
        worst = std::max(worst, std::abs(s / mass));
    }
    return worst;
}

AnovaDecomposition anova_project(const Table& h, const Matching& pi) {
    const Table& w = pi.pi;
    if (!h.same_shape(w)) throw InvalidArgument("anova_project: shape mismatch");
    const Weights marg = margins_of(w);
    const std::size_t tx = h.rows(), ty = h.cols();

    AnovaDecomposition out;
    out.weights = pi;
    out.mean = kernels::active().dot(h.data(), w.data(), h.size());

    Table centered(tx, ty);
    for (std::size_t i = 0; i < tx; ++i)
        for (std::size_t j = 0; j < ty; ++j) centered(i, j) = h(i, j) - out.mean;

    // Normal equations in (f, g) plus one multiplier per zero-mean constraint.
    const std::size_t n = tx + ty + 2;
    Table a(n, n, 0.0);
    std::vector<double> b(n, 0.0);
    for (std::size_t i = 0; i < tx; ++i) {
        a(i, i) = marg.p[i];
        for (std::size_t j = 0; j < ty; ++j) {
            a(i, tx + j) = w(i, j);
            b[i] += w(i, j) * centered(i, j);
        }
        a(i, tx + ty) = marg.p[i];
        a(tx + ty, i) = marg.p[i];
    }
    for (std::size_t j = 0; j < ty; ++j) {
        a(tx + j, tx + j) = marg.q[j];
        for (std::size_t i = 0; i < tx; ++i) {
            a(tx + j, i) = w(i, j);
            b[tx + j] += w(i, j) * centered(i, j);
        }
        a(tx + j, tx + ty + 1) = marg.q[j];
        a(tx + ty + 1, tx + j) = marg.q[j];
    }

    const auto fill_residual = [&] {
        out.residual = Table(tx, ty);
        for (std::size_t i = 0; i < tx; ++i)
            for (std::size_t j = 0; j < ty; ++j)
                out.residual(i, j) = centered(i, j) - out.f[i] - out.g[j];
    };

    std::vector<double> sol;
    bool ok = solve_dense(a, b, sol);
    if (ok) {
        out.f.assign(sol.begin(), sol.begin() + tx);
        out.g.assign(sol.begin() + tx, sol.begin() + tx + ty);
        out.iterations = 0;
        fill_residual();
        ok = out.conditional_mean_violation() < 1e-8;
    }
    if (!ok) {
        backfit(w, marg, centered, out.f, out.g, out.converged, out.iterations);
        fill_residual();
        if (out.conditional_mean_violation() >= 1e-8) out.converged = false;
        if (!out.converged)
            throw ConvergenceError(
                "anova_project: residual conditional-mean violation " +
                std::to_string(out.conditional_mean_violation()) +
                " after backfitting");
    }
    return out;
}

} // namespace tumatch
