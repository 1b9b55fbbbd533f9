#pragma once

#include "btspec/types.hpp"

namespace btspec {

/// Small dense complex matrix, row-major. Only what the eigensolver and the
/// test oracles need.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    cdouble& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const cdouble& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    static DenseMatrix identity(int n);

private:
    int rows_ = 0, cols_ = 0;
    cvector a_;
};

struct EigenDecomposition {
    std::vector<cdouble> values;
    DenseMatrix vectors; // column k is the (normalized) eigenvector for values[k]
};

/// Eigenvalues of a general dense complex matrix via Householder reduction to
/// Hessenberg form followed by shifted QR; eigenvectors recovered from the
/// Schur factor by back-substitution. Intended for modest n (Arnoldi Ritz
/// problems and dense test oracles).
EigenDecomposition dense_eig(const DenseMatrix& A, bool want_vectors = true);

/// Same, but A is already upper Hessenberg (entries below the first
/// subdiagonal are ignored).
EigenDecomposition hessenberg_eig(const DenseMatrix& H, bool want_vectors = true);

} // namespace btspec
