#include "btspec/sparse.hpp"

#include <algorithm>
#include <numeric>

namespace btspec {

SparseMatrix::SparseMatrix(int n, std::vector<int> row_ptr, std::vector<int> cols, cvector vals)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(vals)) {
    if (static_cast<int>(row_ptr_.size()) != n_ + 1)
        throw Error("SparseMatrix: row pointer length mismatch");
    if (cols_.size() != vals_.size())
        throw Error("SparseMatrix: cols/vals length mismatch");
    for (int i = 0; i < n_; ++i) {
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (cols_[k] < 0 || cols_[k] >= n_)
                throw Error("SparseMatrix: column index out of range");
            if (k > row_ptr_[i] && cols_[k] <= cols_[k - 1])
                throw Error("SparseMatrix: column indices not strictly increasing");
        }
    }
}

void SparseMatrix::apply(const cvector& x, cvector& y) const {
    if (static_cast<int>(x.size()) != n_)
        throw Error("spmv: dimension mismatch");
    y.resize(n_);
    const int* __restrict rp = row_ptr_.data();
    const int* __restrict ci = cols_.data();
    const cdouble* __restrict v = vals_.data();
    const cdouble* __restrict xp = x.data();
    for (int i = 0; i < n_; ++i) {
        double sr = 0.0, si = 0.0;
        for (int k = rp[i]; k < rp[i + 1]; ++k) {
            const cdouble a = v[k];
            const cdouble b = xp[ci[k]];
            sr += a.real() * b.real() - a.imag() * b.imag();
            si += a.real() * b.imag() + a.imag() * b.real();
        }
        y[i] = cdouble(sr, si);
    }
}

cvector SparseMatrix::apply(const cvector& x) const {
    cvector y;
    apply(x, y);
    return y;
}

cvector SparseMatrix::diagonal() const {
    cvector d(n_, 0.0);
    for (int i = 0; i < n_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            if (cols_[k] == i) d[i] = vals_[k];
    return d;
}

void SparseMatrix::shift_diagonal(cdouble z) {
    for (int i = 0; i < n_; ++i) {
        bool found = false;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (cols_[k] == i) {
                vals_[k] += z;
                found = true;
                break;
            }
        }
        if (!found) throw Error("shift_diagonal: missing diagonal entry in pattern");
    }
}

SparseMatrix SparseMatrix::conjugate_transpose() const {
    std::vector<int> count(n_ + 1, 0);
    for (int c : cols_) count[c + 1]++;
    std::vector<int> rp(n_ + 1, 0);
    for (int i = 0; i < n_; ++i) rp[i + 1] = rp[i] + count[i + 1];
    std::vector<int> fill = rp;
    std::vector<int> cols(cols_.size());
    cvector vals(vals_.size());
    for (int i = 0; i < n_; ++i) {
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            int pos = fill[cols_[k]]++;
            cols[pos] = i;
            vals[pos] = std::conj(vals_[k]);
        }
    }
    // rows come out sorted because the source rows are visited in order
    return SparseMatrix(n_, std::move(rp), std::move(cols), std::move(vals));
}

double SparseMatrix::hermitian_defect() const {
    SparseMatrix at = conjugate_transpose();
    double worst = 0.0;
    for (int i = 0; i < n_; ++i) {
        int ka = row_ptr_[i], kb = at.row_ptr_[i];
        const int ea = row_ptr_[i + 1], eb = at.row_ptr_[i + 1];
        while (ka < ea || kb < eb) {
            int ca = ka < ea ? cols_[ka] : n_;
            int cb = kb < eb ? at.cols_[kb] : n_;
            if (ca == cb) {
                worst = std::max(worst, std::abs(vals_[ka] - at.vals_[kb]));
                ++ka, ++kb;
            } else if (ca < cb) {
                worst = std::max(worst, std::abs(vals_[ka]));
                ++ka;
            } else {
                worst = std::max(worst, std::abs(at.vals_[kb]));
                ++kb;
            }
        }
    }
    return worst;
}

void SparseBuilder::add(int row, int col, cdouble value) {
    if (row < 0 || row >= n_ || col < 0 || col >= n_)
        throw Error("SparseBuilder: index out of range");
    rows_.push_back(row);
    cols_.push_back(col);
    vals_.push_back(value);
}

SparseMatrix SparseBuilder::build() const {
    std::vector<std::size_t> order(rows_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows_[a] != rows_[b]) return rows_[a] < rows_[b];
        return cols_[a] < cols_[b];
    });

    std::vector<int> rp(n_ + 1, 0);
    std::vector<int> cols;
    cvector vals;
    cols.reserve(order.size());
    vals.reserve(order.size());
    int prev_row = -1, prev_col = -1;
    for (std::size_t idx : order) {
        int r = rows_[idx], c = cols_[idx];
        if (r == prev_row && c == prev_col) {
            vals.back() += vals_[idx];
        } else {
            cols.push_back(c);
            vals.push_back(vals_[idx]);
            prev_row = r;
            prev_col = c;
            rp[r + 1]++;
        }
    }
    for (int i = 0; i < n_; ++i) rp[i + 1] += rp[i];
    return SparseMatrix(n_, std::move(rp), std::move(cols), std::move(vals));
}

} // namespace btspec
