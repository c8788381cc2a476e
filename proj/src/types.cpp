#include "tumatch/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "tumatch/common.hpp"
#include "tumatch/kernels.hpp"

namespace tumatch {

double Dimension::value(std::size_t level_index) const {
    const std::string& s = levels.at(level_index);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return v;
    return static_cast<double>(level_index);
}

TypeSide TypeSide::flat(std::vector<std::string> labels) {
    if (labels.empty()) throw InvalidArgument("type space side has no labels");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
        throw InvalidArgument("type space labels are not unique");
    TypeSide side;
    side.labels_ = std::move(labels);
    return side;
}

TypeSide TypeSide::product(std::vector<Dimension> dims) {
    if (dims.empty()) throw InvalidArgument("type space side has no dimensions");
    for (const auto& d : dims) {
        if (d.levels.empty())
            throw InvalidArgument("dimension '" + d.name + "' has no levels");
        std::set<std::string> seen(d.levels.begin(), d.levels.end());
        if (seen.size() != d.levels.size())
            throw InvalidArgument("dimension '" + d.name + "' has duplicate levels");
    }
    TypeSide side;
    side.dims_ = std::move(dims);
    side.build_labels();
    return side;
}

void TypeSide::build_labels() {
    std::size_t total = 1;
    strides_.assign(dims_.size(), 0);
    for (std::size_t d = dims_.size(); d-- > 0;) {
        strides_[d] = total;
        total *= dims_[d].levels.size();
    }
    labels_.clear();
    labels_.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::string label;
        for (std::size_t d = 0; d < dims_.size(); ++d) {
            if (d) label += '.';
            label += dims_[d].levels[level_of(i, d)];
        }
        labels_.push_back(std::move(label));
    }
}

std::size_t TypeSide::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw InvalidArgument("unknown type label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t TypeSide::index_of_levels(const std::vector<std::string>& levels) const {
    if (!factored())
        throw InvalidArgument("type space side has no factor structure");
    if (levels.size() != dims_.size())
        throw InvalidArgument("wrong number of level values");
    std::size_t idx = 0;
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        const auto& lv = dims_[d].levels;
        const auto it = std::find(lv.begin(), lv.end(), levels[d]);
        if (it == lv.end())
            throw InvalidArgument("unknown level '" + levels[d] + "' for dimension '" +
                                  dims_[d].name + "'");
        idx += strides_[d] * static_cast<std::size_t>(it - lv.begin());
    }
    return idx;
}

std::size_t TypeSide::level_of(std::size_t i, std::size_t d) const {
    if (!factored()) throw InvalidArgument("type space side has no factor structure");
    return (i / strides_[d]) % dims_[d].levels.size();
}

std::size_t TypeSide::dimension_index(const std::string& name) const {
    for (std::size_t d = 0; d < dims_.size(); ++d)
        if (dims_[d].name == name) return d;
    throw InvalidArgument("unknown dimension '" + name + "'");
}

void Margins::validate() const {
    if (p.empty() || q.empty()) throw InvalidArgument("margins are empty");
    for (const auto* side : {&p, &q}) {
        double sum = 0.0;
        for (double v : *side) {
            if (!(v >= 0.0)) throw InvalidArgument("margin entry is negative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw InvalidArgument("margin does not sum to one");
    }
}

bool Margins::strictly_positive() const {
    for (double v : p)
        if (v <= 0.0) return false;
    for (double v : q)
        if (v <= 0.0) return false;
    return true;
}

void Margins::require_strictly_positive(const char* who) const {
    validate();
    if (!strictly_positive())
        throw InvalidArgument(std::string(who) +
                              ": zero-mass type present; drop it with compact() first");
}

Margins uniform_margins(std::size_t tx, std::size_t ty) {
    Margins m;
    m.p.assign(tx, 1.0 / static_cast<double>(tx));
    m.q.assign(ty, 1.0 / static_cast<double>(ty));
    return m;
}

CompactResult compact(const Margins& m) {
    m.validate();
    CompactResult r;
    for (std::size_t i = 0; i < m.p.size(); ++i)
        if (m.p[i] > 0.0) {
            r.keep_x.push_back(i);
            r.margins.p.push_back(m.p[i]);
        }
    for (std::size_t j = 0; j < m.q.size(); ++j)
        if (m.q[j] > 0.0) {
            r.keep_y.push_back(j);
            r.margins.q.push_back(m.q[j]);
        }
    if (r.margins.p.empty() || r.margins.q.empty())
        throw InvalidArgument("compact: all types have zero mass");
    return r;
}

Table compact_table(const Table& t, const std::vector<std::size_t>& keep_x,
                    const std::vector<std::size_t>& keep_y) {
    Table out(keep_x.size(), keep_y.size());
    for (std::size_t i = 0; i < keep_x.size(); ++i)
        for (std::size_t j = 0; j < keep_y.size(); ++j)
            out(i, j) = t(keep_x[i], keep_y[j]);
    return out;
}

double Matching::margin_residual(const Margins& m) const {
    if (pi.rows() != m.p.size() || pi.cols() != m.q.size())
        throw InvalidArgument("matching: shape does not fit margins");
    double res = 0.0;
    std::vector<double> col(pi.cols(), 0.0);
    for (std::size_t i = 0; i < pi.rows(); ++i) {
        const double rs = kernels::active().sum(pi.row(i), pi.cols());
        res = std::max(res, std::abs(rs - m.p[i]));
        for (std::size_t j = 0; j < pi.cols(); ++j) col[j] += pi(i, j);
    }
    for (std::size_t j = 0; j < pi.cols(); ++j)
        res = std::max(res, std::abs(col[j] - m.q[j]));
    return res;
}

void Matching::validate(const Margins& m, double tol) const {
    for (std::size_t i = 0; i < pi.rows(); ++i)
        for (std::size_t j = 0; j < pi.cols(); ++j)
            if (!(pi(i, j) >= 0.0))
                throw InvalidArgument("matching has a negative cell");
    if (margin_residual(m) > tol)
        throw InvalidArgument("matching violates its margins");
}

Matching product_matching(const Margins& m) {
    m.validate();
    Matching out;
    out.pi = Table(m.p.size(), m.q.size());
    for (std::size_t i = 0; i < m.p.size(); ++i)
        for (std::size_t j = 0; j < m.q.size(); ++j) out.pi(i, j) = m.p[i] * m.q[j];
    return out;
}

void Theta::validate() const {
    if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
    if (split) {
        if (split->first < 0.0 || split->second < 0.0)
            throw InvalidArgument("sigma split components must be nonnegative");
        if (split->first + split->second != sigma)
            throw InvalidArgument("sigma split must add up to sigma");
    }
}

} // namespace tumatch
