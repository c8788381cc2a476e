#include "tumatch/model.hpp"

#include <algorithm>
#include <cmath>

#include "tumatch/common.hpp"
#include "tumatch/kernels.hpp"
#include "tumatch/rng.hpp"

namespace tumatch {

Table build_surplus(const BasisSet& basis, const std::vector<double>& lambda) {
    if (basis.size() == 0) throw InvalidArgument("build_surplus: empty basis");
    if (lambda.size() != basis.size())
        throw InvalidArgument("build_surplus: weight count does not match basis size");
    Table phi(basis.rows(), basis.cols(), 0.0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const Table& t = basis[k].values;
        for (std::size_t idx = 0; idx < phi.size(); ++idx)
            phi.data()[idx] += lambda[k] * t.data()[idx];
    }
    return phi;
}

double entropy(const std::vector<double>& margin) {
    double s = 0.0;
    for (double v : margin) {
        if (v < 0.0) throw InvalidArgument("entropy: negative probability");
        if (v > 0.0) s -= v * std::log(v);
    }
    return s;
}

double mutual_information(const Matching& pi, const Margins& m) {
    const Table& t = pi.pi;
    if (t.rows() != m.p.size() || t.cols() != m.q.size())
        throw InvalidArgument("mutual_information: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const double v = t(i, j);
            if (v == 0.0) continue;
            const double pq = m.p[i] * m.q[j];
            if (pq == 0.0)
                throw InvalidArgument(
                    "mutual_information: positive mass on a zero-mass product cell");
            s += v * std::log(v / pq);
        }
    }
    return s;
}

std::vector<double> covariations(const Table& pi, const BasisSet& basis) {
    if (pi.rows() != basis.rows() || pi.cols() != basis.cols())
        throw InvalidArgument("covariations: shape mismatch");
    std::vector<double> c(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k)
        c[k] = kernels::active().dot(pi.data(), basis[k].values.data(), pi.size());
    return c;
}

std::vector<double> covariations(const Matching& pi, const BasisSet& basis) {
    return covariations(pi.pi, basis);
}

Summary make_summary(const Matching& pi, const BasisSet& basis, const Margins& m) {
    Summary s;
    s.covariations = covariations(pi, basis);
    s.mutual_information = mutual_information(pi, m);
    return s;
}

ZmoiResult zmoi_normalize(const Table& phi, const Margins& m) {
    m.require_strictly_positive("zmoi_normalize");
    if (phi.rows() != m.p.size() || phi.cols() != m.q.size())
        throw InvalidArgument("zmoi_normalize: shape mismatch");
    for (std::size_t idx = 0; idx < phi.size(); ++idx)
        if (!std::isfinite(phi.data()[idx]))
            throw InvalidArgument("zmoi_normalize: non-finite surplus entry");

    // Under product weights the two-way decomposition is closed form:
    // c is the grand mean, f and g are centered conditional means.
    ZmoiResult r;
    const std::size_t tx = phi.rows(), ty = phi.cols();
    std::vector<double> row_mean(tx, 0.0), col_mean(ty, 0.0);
    for (std::size_t i = 0; i < tx; ++i)
        row_mean[i] = kernels::active().dot(phi.row(i), m.q.data(), ty);
    for (std::size_t j = 0; j < ty; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < tx; ++i) s += m.p[i] * phi(i, j);
        col_mean[j] = s;
    }
    r.c = kernels::active().dot(row_mean.data(), m.p.data(), tx);
    r.f.resize(tx);
    r.g.resize(ty);
    for (std::size_t i = 0; i < tx; ++i) r.f[i] = row_mean[i] - r.c;
    for (std::size_t j = 0; j < ty; ++j) r.g[j] = col_mean[j] - r.c;
    r.phi_bar = Table(tx, ty);
    for (std::size_t i = 0; i < tx; ++i)
        for (std::size_t j = 0; j < ty; ++j)
            r.phi_bar(i, j) = phi(i, j) - r.f[i] - r.g[j] - r.c;
    return r;
}

CoupleSample sample_couples(const Matching& pi, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidArgument("sample_couples: need at least one draw");
    const Table& t = pi.pi;
    std::vector<double> cdf(t.size());
    double acc = 0.0;
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        const double v = t.data()[idx];
        if (!(v >= 0.0)) throw InvalidArgument("sample_couples: negative cell");
        acc += v;
        cdf[idx] = acc;
    }
    if (acc <= 0.0) throw InvalidArgument("sample_couples: zero total mass");

    CoupleSample out;
    out.seed = seed;
    out.pairs.reserve(n);
    Rng rng(seed);
    const std::size_t cols = t.cols();
    for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= t.size()) idx = t.size() - 1;
        out.pairs.emplace_back(static_cast<std::uint32_t>(idx / cols),
                               static_cast<std::uint32_t>(idx % cols));
    }
    return out;
}

EmpiricalResult empirical_matching(const CoupleSample& sample, std::size_t tx,
                                   std::size_t ty, const BasisSet* basis) {
    if (sample.pairs.empty()) throw InvalidArgument("empirical_matching: empty sample");
    EmpiricalResult r;
    r.matching.pi = Table(tx, ty, 0.0);
    const double w = 1.0 / static_cast<double>(sample.pairs.size());
    for (const auto& [i, j] : sample.pairs) {
        if (i >= tx || j >= ty)
            throw InvalidArgument("empirical_matching: couple index out of range");
        r.matching.pi(i, j) += w;
    }
    r.margins.p.assign(tx, 0.0);
    r.margins.q.assign(ty, 0.0);
    for (std::size_t i = 0; i < tx; ++i)
        for (std::size_t j = 0; j < ty; ++j) {
            r.margins.p[i] += r.matching.pi(i, j);
            r.margins.q[j] += r.matching.pi(i, j);
        }
    if (basis) r.summary = make_summary(r.matching, *basis, r.margins);
    return r;
}

Matching apply_pseudocount(const CoupleSample& sample, std::size_t tx, std::size_t ty,
                           double alpha) {
    if (alpha < 0.0) throw InvalidArgument("apply_pseudocount: negative pseudo count");
    const double n = static_cast<double>(sample.pairs.size());
    Matching out;
    out.pi = Table(tx, ty, alpha / static_cast<double>(tx * ty));
    for (const auto& [i, j] : sample.pairs) out.pi(i, j) += 1.0;
    const double denom = n + alpha;
    for (std::size_t idx = 0; idx < out.pi.size(); ++idx) out.pi.data()[idx] /= denom;
    return out;
}

} // namespace tumatch
