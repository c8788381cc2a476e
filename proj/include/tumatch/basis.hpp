#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tumatch/table.hpp"
#include "tumatch/types.hpp"

namespace tumatch {

enum class BasisKind {
    Dense,
    IndicatorInteraction, // 1 at a single cell (i, j)
    DiagonalIndicator,    // 1 when both sides sit at the same level of one dimension
    CoordinateProduct,    // numeric code of a man dimension times one of a woman dimension
};

struct BasisFunction {
    std::string name;
    BasisKind kind = BasisKind::Dense;
    Table values; // T_x x T_y
};

// K basis assorting functions sharing one shape.
class BasisSet {
public:
    BasisSet() = default;

    void add(BasisFunction f);
    std::size_t size() const { return items_.size(); }
    const BasisFunction& operator[](std::size_t k) const { return items_.at(k); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    static BasisFunction dense(std::string name, Table values);
    static BasisFunction indicator_interaction(std::string name, std::size_t tx,
                                               std::size_t ty, std::size_t i,
                                               std::size_t j);
    // level given: 1{x.dim == level && y.dim == level}; level omitted:
    // 1{x.dim == y.dim} (the whole-dimension match indicator)
    static BasisFunction diagonal_indicator(std::string name, const TypeSpace& space,
                                            const std::string& dim,
                                            std::optional<std::string> level);
    static BasisFunction coordinate_product(std::string name, const TypeSpace& space,
                                            const std::string& dim_x,
                                            const std::string& dim_y);

private:
    std::vector<BasisFunction> items_;
    std::size_t rows_ = 0, cols_ = 0;
};

} // namespace tumatch
