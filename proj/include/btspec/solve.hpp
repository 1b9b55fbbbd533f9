#pragma once

#include "btspec/sparse.hpp"

namespace btspec {

struct SolveOptions {
    double tol = 1e-12;   // relative residual target ||Ax-b|| <= tol*||b||
    int maxit = 2000;
    int stagnation_window = 50; // BiCGSTAB iterations without progress before GMRES takes over
    int gmres_restart = 50;
};

struct SolveResult {
    cvector x;
    int iterations = 0;       // total matvec-bearing iterations across methods
    double residual = 0.0;    // true relative residual, re-verified by one spmv
    bool used_gmres = false;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double best_residual, int iterations)
        : Error(what), best_residual(best_residual), iterations(iterations) {}
    double best_residual;
    int iterations;
};

/// Jacobi-preconditioned BiCGSTAB; falls back to restarted GMRES when the
/// residual stops decreasing. x0, when given, seeds the iteration (pass the
/// right-hand side for diagonally dominant time steps). Throws SolverError
/// carrying the best residual reached when neither method converges.
SolveResult solve(const SparseMatrix& A, const cvector& b, const SolveOptions& opts,
                  const cvector* x0 = nullptr);

} // namespace btspec
