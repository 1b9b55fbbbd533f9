#pragma once

#include "btspec/types.hpp"

#include <cstdint>
#include <functional>

namespace btspec {

/// Black-box linear map y = A x.
using LinearMap = std::function<void(const cvector& x, cvector& y)>;

struct RitzPair {
    cdouble value;
    double residual = 0.0; // ||A v - theta v|| / ||v||, explicit when converged
    cvector vector;
    bool converged = false;
};

struct RitzSet {
    std::vector<RitzPair> pairs; // sorted by descending |value|
    int dimension = 0;           // Krylov dimension actually built
    int matvecs = 0;
    bool breakdown = false;      // basis exhausted before the requested dimension

    // Krylov data kept for the Arnoldi-relation and orthonormality checks:
    // basis holds dimension+1 columns (dimension on breakdown), hess[j] is
    // column j of the extended Hessenberg matrix with length j+2.
    std::vector<cvector> basis;
    std::vector<std::vector<cdouble>> hess;
};

struct ArnoldiOptions {
    int m = 30;              // Krylov dimension
    double tol = 1e-10;      // residual threshold ||Av - theta v||/||v||
    std::uint64_t seed = 1;  // start-vector seed
};

/// Arnoldi iteration with a seeded random start vector, modified Gram-Schmidt
/// plus one full reorthogonalization pass per step. Ritz pairs come from the
/// dense Hessenberg eigenproblem; residuals of candidate pairs are re-evaluated
/// with an explicit matvec, and `converged` means that explicit residual is
/// within tol. Breakdown before m steps is reported, not thrown.
RitzSet arnoldi(const LinearMap& apply, int n, const ArnoldiOptions& opts);

/// max_ij |V^H V - I| over the basis columns; exposed for the orthonormality
/// property tests.
double arnoldi_basis_defect(const std::vector<cvector>& basis);

} // namespace btspec
