#include "tumatch/basis.hpp"

#include <algorithm>

#include "tumatch/common.hpp"

namespace tumatch {

void BasisSet::add(BasisFunction f) {
    if (f.values.empty()) throw InvalidArgument("basis function has no table");
    if (items_.empty()) {
        rows_ = f.values.rows();
        cols_ = f.values.cols();
    } else if (f.values.rows() != rows_ || f.values.cols() != cols_) {
        throw InvalidArgument("basis function '" + f.name + "' has a different shape");
    }
    items_.push_back(std::move(f));
}

BasisFunction BasisSet::dense(std::string name, Table values) {
    return BasisFunction{std::move(name), BasisKind::Dense, std::move(values)};
}

BasisFunction BasisSet::indicator_interaction(std::string name, std::size_t tx,
                                              std::size_t ty, std::size_t i,
                                              std::size_t j) {
    if (i >= tx || j >= ty)
        throw InvalidArgument("indicator_interaction: cell out of range");
    Table t(tx, ty, 0.0);
    t(i, j) = 1.0;
    return BasisFunction{std::move(name), BasisKind::IndicatorInteraction, std::move(t)};
}

BasisFunction BasisSet::diagonal_indicator(std::string name, const TypeSpace& space,
                                           const std::string& dim,
                                           std::optional<std::string> level) {
    const std::size_t dx = space.men.dimension_index(dim);
    const std::size_t dy = space.women.dimension_index(dim);
    const auto& lev_x = space.men.dimensions()[dx].levels;
    const auto& lev_y = space.women.dimensions()[dy].levels;

    std::ptrdiff_t lx = -1, ly = -1;
    if (level) {
        const auto ix = std::find(lev_x.begin(), lev_x.end(), *level);
        const auto iy = std::find(lev_y.begin(), lev_y.end(), *level);
        if (ix == lev_x.end() || iy == lev_y.end())
            throw InvalidArgument("diagonal_indicator: unknown level '" + *level + "'");
        lx = ix - lev_x.begin();
        ly = iy - lev_y.begin();
    }

    Table t(space.men.count(), space.women.count(), 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const std::size_t li = space.men.level_of(i, dx);
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const std::size_t lj = space.women.level_of(j, dy);
            const bool match =
                level ? (li == static_cast<std::size_t>(lx) &&
                         lj == static_cast<std::size_t>(ly))
                      : (lev_x[li] == lev_y[lj]);
            if (match) t(i, j) = 1.0;
        }
    }
    return BasisFunction{std::move(name), BasisKind::DiagonalIndicator, std::move(t)};
}

BasisFunction BasisSet::coordinate_product(std::string name, const TypeSpace& space,
                                           const std::string& dim_x,
                                           const std::string& dim_y) {
    const std::size_t dx = space.men.dimension_index(dim_x);
    const std::size_t dy = space.women.dimension_index(dim_y);
    const Dimension& dimx = space.men.dimensions()[dx];
    const Dimension& dimy = space.women.dimensions()[dy];

    Table t(space.men.count(), space.women.count());
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const double vx = dimx.value(space.men.level_of(i, dx));
        for (std::size_t j = 0; j < t.cols(); ++j)
            t(i, j) = vx * dimy.value(space.women.level_of(j, dy));
    }
    return BasisFunction{std::move(name), BasisKind::CoordinateProduct, std::move(t)};
}

} // namespace tumatch
