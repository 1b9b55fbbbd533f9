#include "btspec/arnoldi.hpp"

#include "btspec/dense_eig.hpp"
#include "btspec/rng.hpp"

#include <algorithm>
#include <cmath>

namespace btspec {

RitzSet arnoldi(const LinearMap& apply, int n, const ArnoldiOptions& opts) {
    if (opts.m < 1 || opts.m > n)
        throw Error("arnoldi: need 1 <= m <= n");

    RitzSet out;
    RngStream rng(opts.seed);
    cvector v0(n);
    for (int i = 0; i < n; ++i)
        v0[i] = cdouble(rng.next_double() - 0.5, rng.next_double() - 0.5);
    double nrm = norm2(v0);
    if (nrm == 0.0) throw Error("arnoldi: zero start vector");
    scale(1.0 / nrm, v0);

    std::vector<cvector>& V = out.basis;
    std::vector<std::vector<cdouble>>& H = out.hess;
    V.push_back(std::move(v0));

    cvector w(n);
    int k = 0;
    for (; k < opts.m; ++k) {
        apply(V[k], w);
        ++out.matvecs;
        H.emplace_back(k + 2, cdouble(0.0));
        // modified Gram-Schmidt, then one full reorthogonalization pass;
        // the dominant Ritz values here cluster on circles, so the second
        // pass is what keeps the basis orthonormal to ~1e-14
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= k; ++i) {
                cdouble h = dot(V[i], w);
                axpy(-h, V[i], w);
                H[k][i] += h;
            }
        }
        double beta = norm2(w);
        H[k][k + 1] = beta;
        if (beta <= 1e-14) {
            out.breakdown = true;
            ++k;
            break;
        }
        cvector next = w;
        scale(1.0 / beta, next);
        V.push_back(std::move(next));
    }
    out.dimension = k;
    if (k == 0) return out;

    // Ritz pairs from the k x k Hessenberg eigenproblem
    DenseMatrix Hk(k, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i <= std::min(j + 1, k - 1); ++i) Hk(i, j) = H[j][i];
    EigenDecomposition ed = hessenberg_eig(Hk, true);

    const double beta_k = std::abs(H[k - 1][k]);
    out.pairs.reserve(k);
    for (int j = 0; j < k; ++j) {
        RitzPair p;
        p.value = ed.values[j];
        // Hessenberg residual estimate ||A v - theta v|| = beta_k |y_k|
        double est = beta_k * std::abs(ed.vectors(k - 1, j));
        p.vector.assign(n, 0.0);
        for (int i = 0; i < k; ++i) axpy(ed.vectors(i, j), V[i], p.vector);
        double vn = norm2(p.vector);
        if (vn > 0.0) scale(1.0 / vn, p.vector);
        if (est <= opts.tol) {
            apply(p.vector, w);
            ++out.matvecs;
            axpy(-p.value, p.vector, w);
            p.residual = norm2(w);
            p.converged = p.residual <= opts.tol;
        } else {
            p.residual = est;
            p.converged = false;
        }
        out.pairs.push_back(std::move(p));
    }
    std::sort(out.pairs.begin(), out.pairs.end(), [](const RitzPair& a, const RitzPair& b) {
        return std::abs(a.value) > std::abs(b.value);
    });
    return out;
}

double arnoldi_basis_defect(const std::vector<cvector>& basis) {
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i; j < basis.size(); ++j) {
            cdouble g = dot(basis[i], basis[j]);
            if (i == j) g -= 1.0;
            worst = std::max(worst, std::abs(g));
        }
    }
    return worst;
}

} // namespace btspec
