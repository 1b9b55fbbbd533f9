#pragma once

#include "btspec/arnoldi.hpp"
#include "btspec/operators.hpp"
#include "btspec/solve.hpp"

namespace btspec {

/// One-period monodromy of the gauge-transformed cell operator. The potential
/// i g x never appears here: it lives in the drifting phase p(t) = p0 - g t,
/// sampled at step midpoints p_j = p0 - g (j+1/2) dt. After the Nt steps the
/// state is (p0 - 2pi)-Floquet; the unit-modulus diagonal e^{-2 pi i x_j}
/// brings it back to the p0 gauge, making the map an endomorphism.
class MonodromyContext {
public:
    MonodromyContext(const ProblemConfig& config, const CellGrid& grid);

    const ProblemConfig& config() const { return config_; }
    const CellGrid& grid() const { return *grid_; }
    int dof_count() const { return grid_->active_count(); }
    double dt() const { return dt_; }
    int steps() const { return static_cast<int>(phase_schedule_.size()); }
    double phase_at_step(int j) const { return phase_schedule_[j]; }
    const cvector& realignment() const { return realignment_; }

    /// Crank-Nicolson midpoint step j:
    /// (I + dt/2 B(p_j)) w' = (I - dt/2 B(p_j)) w.
    void cn_step(cvector& w, int j) const;

    /// Nt steps followed by gauge realignment; a contraction.
    void monodromy_apply(const cvector& w0, cvector& out) const;
    cvector monodromy_apply(const cvector& w0) const;

    /// s-fold composition; eigenvalues are mu^s.
    void monodromy_power_apply(const cvector& w0, int s, cvector& out) const;

    /// Evolve one full period WITHOUT the final realignment, storing the Nt
    /// pre-step states (snapshots[j] = state at time j dt, snapshots[0] = w0).
    /// Used by the eigenfunction reconstruction, which needs the trajectory.
    void evolve_with_snapshots(const cvector& w0, std::vector<cvector>& snapshots) const;

private:
    ProblemConfig config_;
    const CellGrid* grid_;
    CellStencil stencil_;
    double dt_;
    std::vector<double> phase_schedule_;
    cvector realignment_;

    // scratch reused across steps; mutable so apply() stays logically const
    mutable SparseMatrix lhs_;
    mutable cvector rhs_;
};

/// Nt identical CN steps of size T/Nt with a fixed (generally non-Hermitian)
/// matrix; no realignment. Backs the truncated-strip semigroup.
cvector strip_semigroup_apply(const SparseMatrix& A, double T, int Nt, const cvector& w,
                              const SolveOptions& solver);

/// Rayleigh quotient and explicit residual of v under a single application of
/// the map; resolves the Im-band aliasing left by monodromy powers.
std::pair<cdouble, double> rayleigh_refine(const LinearMap& apply, const cvector& v);

} // namespace btspec
