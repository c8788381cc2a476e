#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tumatch/table.hpp"

namespace tumatch {

// One named discrete dimension of a type space side, e.g. education with
// levels {D, G}.
struct Dimension {
    std::string name;
    std::vector<std::string> levels;

    // numeric code of a level: the label parsed as a number when possible,
    // the 0-based level index otherwise (used by coordinate_product bases)
    double value(std::size_t level_index) const;
};

// One side of the market: either a flat list of labels or the Cartesian
// product of named dimensions (first dimension varies slowest).
class TypeSide {
public:
    static TypeSide flat(std::vector<std::string> labels);
    static TypeSide product(std::vector<Dimension> dims);

    std::size_t count() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Dimension>& dimensions() const { return dims_; }
    bool factored() const { return !dims_.empty(); }

    // index of a full label; throws InvalidArgument on unknown label
    std::size_t index_of(const std::string& label) const;
    // index from one level label per dimension (factored sides only)
    std::size_t index_of_levels(const std::vector<std::string>& levels) const;
    // level index of dimension d for flat index i
    std::size_t level_of(std::size_t i, std::size_t d) const;

    std::size_t dimension_index(const std::string& name) const;

private:
    std::vector<Dimension> dims_;          // empty for flat sides
    std::vector<std::string> labels_;      // always populated
    std::vector<std::size_t> strides_;     // mixed-radix strides per dimension
    void build_labels();
};

struct TypeSpace {
    TypeSide men;
    TypeSide women;
};

// Probability vectors over the two sides.
struct Margins {
    std::vector<double> p; // men
    std::vector<double> q; // women

    // checks nonnegativity and unit mass (1e-12); throws InvalidArgument
    void validate() const;
    bool strictly_positive() const;
    // throws InvalidArgument when a zero-mass type is present; solvers call
    // this instead of silently dropping types (see compact())
    void require_strictly_positive(const char* who) const;
};

Margins uniform_margins(std::size_t tx, std::size_t ty);

// Explicit removal of zero-mass types. Returns the compacted margins plus the
// surviving indices on each side so tables can be compacted consistently.
struct CompactResult {
    Margins margins;
    std::vector<std::size_t> keep_x;
    std::vector<std::size_t> keep_y;
};
CompactResult compact(const Margins& m);
Table compact_table(const Table& t, const std::vector<std::size_t>& keep_x,
                    const std::vector<std::size_t>& keep_y);

// Joint probability table over (man type, woman type) with prescribed
// margins.
struct Matching {
    Table pi;

    // sup-norm violation of the margin constraints
    double margin_residual(const Margins& m) const;
    // throws InvalidArgument when entries are negative or margins are off by
    // more than tol
    void validate(const Margins& m, double tol = 1e-9) const;
};

Matching product_matching(const Margins& m);

// Assorting weights plus total heterogeneity, with an optional split
// (sigma1, sigma2); the default split is half and half.
struct Theta {
    std::vector<double> lambda;
    double sigma = 1.0;
    std::optional<std::pair<double, double>> split;

    std::pair<double, double> split_or_default() const {
        if (split) return *split;
        return {0.5 * sigma, 0.5 * sigma};
    }
    void validate() const;
};

// Covariations plus mutual information: the sufficient statistics of a
// matching under a linear surplus specification.
struct Summary {
    std::vector<double> covariations;
    double mutual_information = 0.0;
};

// Indices of N sampled couples plus the seed that produced them.
struct CoupleSample {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::uint64_t seed = 0;
};

} // namespace tumatch
