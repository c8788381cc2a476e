#include "tumatch/kernels.hpp"

#include <cmath>
#include <limits>

namespace tumatch::kernels {
namespace {

// Fixed-order pairwise summation: split in halves down to small blocks.
// The order never depends on the data, so results are reproducible.
template <class Term>
double pairwise(std::size_t lo, std::size_t hi, const Term& term) {
    const std::size_t n = hi - lo;
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise(lo, mid, term) + pairwise(mid, hi, term);
}

double sum_scalar(const double* x, std::size_t n) {
    return pairwise(0, n, [x](std::size_t i) { return x[i]; });
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    return pairwise(0, n, [x, y](std::size_t i) { return x[i] * y[i]; });
}

double logsumexp_scalar(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] > m) m = x[i];
    if (!std::isfinite(m)) return m;
    const double s =
        pairwise(0, n, [x, m](std::size_t i) { return std::exp(x[i] - m); });
    return m + std::log(s);
}

double logsumexp_shifted_scalar(const double* x, const double* s, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - s[i];
        if (d > m) m = d;
    }
    if (!std::isfinite(m)) return m;
    const double acc = pairwise(
        0, n, [x, s, m](std::size_t i) { return std::exp(x[i] - s[i] - m); });
    return m + std::log(acc);
}

void exp_shifted_scalar(const double* x, const double* s, double shift,
                        double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i] - s[i] + shift);
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{sum_scalar, dot_scalar, logsumexp_scalar,
                         logsumexp_shifted_scalar, exp_shifted_scalar, "scalar"};
    return ops;
}

} // namespace tumatch::kernels
