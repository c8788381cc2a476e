#pragma once

#include <cstddef>
#include <vector>

#include "tumatch/common.hpp"

namespace tumatch {

// Dense row-major table of doubles. All joint objects (surplus, matchings,
// basis functions, kernels) are stored this way; rows index men types and
// columns index women types.
class Table {
public:
    Table() : rows_(0), cols_(0) {}
    Table(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Table from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw InvalidArgument("table: no rows");
        Table t(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != t.cols_)
                throw InvalidArgument("table: ragged rows");
            for (std::size_t j = 0; j < t.cols_; ++j) t(i, j) = rows[i][j];
        }
        return t;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    bool same_shape(const Table& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    Table transposed() const {
        Table t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend bool operator==(const Table& a, const Table& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

} // namespace tumatch
