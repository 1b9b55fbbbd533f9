#include "btspec/dense_eig.hpp"

#include <algorithm>
#include <cmath>

namespace btspec {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

namespace {

// Householder reduction to upper Hessenberg, accumulating the transform in Q.
void reduce_to_hessenberg(DenseMatrix& A, DenseMatrix& Q) {
    const int n = A.rows();
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::norm(A(i, k));
        scale = std::sqrt(scale);
        if (scale == 0.0) continue;

        cdouble alpha = A(k + 1, k);
        double anorm = std::abs(alpha);
        cdouble phase = anorm > 0.0 ? alpha / anorm : cdouble(1.0);
        cdouble sigma = phase * scale;

        cvector v(n, 0.0);
        v[k + 1] = alpha + sigma;
        for (int i = k + 2; i < n; ++i) v[i] = A(i, k);
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;

        // A <- (I - beta v v^H) A
        for (int j = k; j < n; ++j) {
            cdouble s = 0.0;
            for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * A(i, j);
            s *= beta;
            for (int i = k + 1; i < n; ++i) A(i, j) -= s * v[i];
        }
        // A <- A (I - beta v v^H)
        for (int i = 0; i < n; ++i) {
            cdouble s = 0.0;
            for (int j = k + 1; j < n; ++j) s += A(i, j) * v[j];
            s *= beta;
            for (int j = k + 1; j < n; ++j) A(i, j) -= s * std::conj(v[j]);
        }
        // Q <- Q (I - beta v v^H)
        for (int i = 0; i < n; ++i) {
            cdouble s = 0.0;
            for (int j = k + 1; j < n; ++j) s += Q(i, j) * v[j];
            s *= beta;
            for (int j = k + 1; j < n; ++j) Q(i, j) -= s * std::conj(v[j]);
        }
        for (int i = k + 2; i < n; ++i) A(i, k) = 0.0;
        A(k + 1, k) = -sigma;
    }
}

struct Givens {
    cdouble c;
    cdouble s;
    double r;
};

// Unitary rotation with [conj(c) conj(s); -s c] [a; b] = [r; 0].
Givens make_givens(cdouble a, cdouble b) {
    Givens g;
    double na = std::abs(a), nb = std::abs(b);
    double r = std::hypot(na, nb);
    if (r == 0.0) {
        g.c = 1.0;
        g.s = 0.0;
        g.r = 0.0;
        return g;
    }
    g.c = a / r;
    g.s = b / r;
    g.r = r;
    return g;
}

// Shifted QR on an upper Hessenberg matrix; returns the (upper triangular)
// Schur factor in H and accumulates the unitary similarity in Z.
void schur_qr(DenseMatrix& H, DenseMatrix& Z) {
    const int n = H.rows();
    const double eps = 1e-15;
    std::vector<Givens> rot(std::max(0, n - 1));

    int hi = n - 1;
    int stuck = 0;
    while (hi > 0) {
        // deflate converged subdiagonals
        int lo = hi;
        while (lo > 0) {
            double off = std::abs(H(lo, lo - 1));
            double diag = std::abs(H(lo, lo)) + std::abs(H(lo - 1, lo - 1));
            if (off <= eps * (diag > 0.0 ? diag : 1.0)) {
                H(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            stuck = 0;
            continue;
        }

        // Wilkinson shift from the trailing 2x2 of the active block
        cdouble a = H(hi - 1, hi - 1), b = H(hi - 1, hi);
        cdouble c = H(hi, hi - 1), d = H(hi, hi);
        cdouble tr = a + d, det = a * d - b * c;
        cdouble disc = std::sqrt(tr * tr - 4.0 * det);
        cdouble m1 = (tr + disc) / 2.0, m2 = (tr - disc) / 2.0;
        cdouble shift = (std::abs(m1 - d) < std::abs(m2 - d)) ? m1 : m2;
        if (++stuck % 12 == 0) // exceptional shift to break rare cycles
            shift = d + cdouble(1.5 * std::abs(H(hi, hi - 1)), 0.0);

        // explicit shifted QR sweep on rows lo..hi; the left rotations must
        // run across the full trailing columns to keep the Schur coupling
        // blocks consistent
        for (int i = lo; i <= hi; ++i) H(i, i) -= shift;
        for (int k = lo; k < hi; ++k) {
            Givens g = make_givens(H(k, k), H(k + 1, k));
            rot[k] = g;
            H(k, k) = g.r;
            H(k + 1, k) = 0.0;
            for (int j = k + 1; j < n; ++j) {
                cdouble x = H(k, j), y = H(k + 1, j);
                H(k, j) = std::conj(g.c) * x + std::conj(g.s) * y;
                H(k + 1, j) = -g.s * x + g.c * y;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const Givens& g = rot[k];
            for (int i = 0; i <= k + 1; ++i) {
                cdouble x = H(i, k), y = H(i, k + 1);
                H(i, k) = x * g.c + y * g.s;
                H(i, k + 1) = -x * std::conj(g.s) + y * std::conj(g.c);
            }
            for (int i = 0; i < Z.rows(); ++i) {
                cdouble x = Z(i, k), y = Z(i, k + 1);
                Z(i, k) = x * g.c + y * g.s;
                Z(i, k + 1) = -x * std::conj(g.s) + y * std::conj(g.c);
            }
        }
        for (int i = lo; i <= hi; ++i) H(i, i) += shift;
    }
}

// Eigenvectors of the triangular Schur factor, transformed back by Z.
DenseMatrix triangular_vectors(const DenseMatrix& T, const DenseMatrix& Z) {
    const int n = T.rows();
    double tnorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) tnorm = std::max(tnorm, std::abs(T(i, j)));
    const double smin = 1e-300 + 1e-16 * tnorm;

    DenseMatrix V(n, n);
    cvector y(n);
    for (int k = 0; k < n; ++k) {
        std::fill(y.begin(), y.end(), cdouble(0.0));
        y[k] = 1.0;
        const cdouble lambda = T(k, k);
        for (int i = k - 1; i >= 0; --i) {
            cdouble s = 0.0;
            for (int j = i + 1; j <= k; ++j) s += T(i, j) * y[j];
            cdouble denom = T(i, i) - lambda;
            if (std::abs(denom) < smin) denom = smin;
            y[i] = -s / denom;
        }
        // v = Z y, normalized
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) {
            cdouble s = 0.0;
            for (int j = 0; j <= k; ++j) s += Z(i, j) * y[j];
            V(i, k) = s;
            nrm += std::norm(s);
        }
        nrm = std::sqrt(nrm);
        if (nrm > 0.0)
            for (int i = 0; i < n; ++i) V(i, k) /= nrm;
    }
    return V;
}

EigenDecomposition eig_from_hessenberg(DenseMatrix H, DenseMatrix Q, bool want_vectors) {
    const int n = H.rows();
    schur_qr(H, Q);
    EigenDecomposition out;
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = H(i, i);
    if (want_vectors) out.vectors = triangular_vectors(H, Q);
    return out;
}

} // namespace

EigenDecomposition dense_eig(const DenseMatrix& A, bool want_vectors) {
    if (A.rows() != A.cols()) throw Error("dense_eig: matrix not square");
    DenseMatrix H = A;
    DenseMatrix Q = DenseMatrix::identity(A.rows());
    reduce_to_hessenberg(H, Q);
    return eig_from_hessenberg(std::move(H), std::move(Q), want_vectors);
}

EigenDecomposition hessenberg_eig(const DenseMatrix& H, bool want_vectors) {
    if (H.rows() != H.cols()) throw Error("hessenberg_eig: matrix not square");
    DenseMatrix T = H;
    for (int i = 2; i < T.rows(); ++i)
        for (int j = 0; j < i - 1; ++j) T(i, j) = 0.0;
    return eig_from_hessenberg(std::move(T), DenseMatrix::identity(H.rows()), want_vectors);
}

} // namespace btspec
