#pragma once

#include "btspec/types.hpp"

#include <cstdint>

namespace btspec {

/// Row-compressed complex square matrix. Column indices are strictly
/// increasing within each row and duplicates are merged at build time.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int n, std::vector<int> row_ptr, std::vector<int> cols, cvector vals);

    int n() const { return n_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(cols_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& cols() const { return cols_; }
    const cvector& vals() const { return vals_; }
    cvector& vals() { return vals_; }

    /// y = A x
    void apply(const cvector& x, cvector& y) const;
    cvector apply(const cvector& x) const;

    cvector diagonal() const;
    /// A += z I (diagonal entries must already exist in the pattern).
    void shift_diagonal(cdouble z);

    SparseMatrix conjugate_transpose() const;

    /// max_ij |A_ij - conj(A_ji)|, for Hermiticity checks.
    double hermitian_defect() const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> cols_;
    cvector vals_;
};

/// Accumulates (row, col, value) triplets; build() sorts rows, merges
/// duplicates by summation and drops exact zeros produced by cancellation
/// only when requested.
class SparseBuilder {
public:
    explicit SparseBuilder(int n) : n_(n) {}

    void add(int row, int col, cdouble value);
    SparseMatrix build() const;

    int n() const { return n_; }

private:
    int n_;
    std::vector<int> rows_;
    std::vector<int> cols_;
    cvector vals_;
};

} // namespace btspec
