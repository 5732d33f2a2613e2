#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace graphon {

/// Dense row-major matrix of doubles. Node counts in this toolkit stay in the
/// hundreds, so density wins over any sparse representation.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n, 0.0);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix&) const = default;

    bool is_symmetric(double tol = 0.0) const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs_diff(const Matrix& other) const {
        assert(rows_ == other.rows_ && cols_ == other.cols_);
        double m = 0.0;
        for (std::size_t k = 0; k < data_.size(); ++k)
            m = std::max(m, std::fabs(data_[k] - other.data_[k]));
        return m;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

}  // namespace graphon
