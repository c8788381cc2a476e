#include "tumatch/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace tumatch {

bool solve_dense(Table a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw InvalidArgument("solve_dense: shape mismatch");
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    if (scale == 0.0) return false;
    const double tiny = 1e-13 * scale;

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(perm[k], k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(perm[i], k));
            if (v > best) { best = v; piv = i; }
        }
        if (best <= tiny) return false;
        std::swap(perm[k], perm[piv]);
        const std::size_t rk = perm[k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const std::size_t ri = perm[i];
            const double f = a(ri, k) / a(rk, k);
            if (f == 0.0) continue;
            a(ri, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(ri, j) -= f * a(rk, j);
            b[ri] -= f * b[rk];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t rk = perm[k];
        double s = b[rk];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(rk, j) * x[j];
        x[k] = s / a(rk, k);
    }
    return true;
}

bool cholesky(const Table& a, Table& lower) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw InvalidArgument("cholesky: not square");
    lower = Table(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) return false;
                lower(i, i) = std::sqrt(s);
            } else {
                lower(i, j) = s / lower(j, j);
            }
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const Table& lower, const std::vector<double>& b) {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw InvalidArgument("cholesky_solve: shape mismatch");
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * y[k];
        y[i] = s / lower(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= lower(k, i) * x[k];
        x[i] = s / lower(i, i);
    }
    return x;
}

Table spd_inverse(const Table& a) {
    Table l;
    if (!cholesky(a, l))
        throw InvalidArgument("spd_inverse: matrix is not positive definite");
    const std::size_t n = a.rows();
    Table inv(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = cholesky_solve(l, e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    // symmetrize against round-off
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double v = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = inv(j, i) = v;
        }
    return inv;
}

std::vector<double> symmetric_eigenvalues(Table a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw InvalidArgument("symmetric_eigenvalues: not square");
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::size_t psd_rank(Table a, double rel_tol) {
    const std::size_t n = a.rows();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
    if (max_diag <= 0.0) return 0;

    std::size_t rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (a(idx[i], idx[i]) > a(idx[piv], idx[piv])) piv = i;
        std::swap(idx[k], idx[piv]);
        const double d = a(idx[k], idx[k]);
        if (d <= rel_tol * max_diag) break;
        ++rank;
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j <= i; ++j) {
                const double v = a(idx[i], idx[j]) -
                                 a(idx[i], idx[k]) * a(idx[j], idx[k]) / d;
                a(idx[i], idx[j]) = a(idx[j], idx[i]) = v;
            }
    }
    return rank;
}

} // namespace tumatch
