#pragma once

#include "btspec/geometry.hpp"
#include "btspec/sparse.hpp"

#include <array>
#include <cstdint>

namespace btspec {

/// Quasimomentum pair stored with representatives in [0, 2pi). The drifting
/// phase schedule inside the propagator works with raw (unreduced) phases;
/// reduction only relabels x-modes and leaves every spectrum unchanged.
struct BlochPhases {
    double p = 0.0;
    double q = 0.0;

    BlochPhases() = default;
    BlochPhases(double p_raw, double q_raw);
};

double wrap_to_2pi(double phase);

/// Closed-form symbol of the discrete cell operator on the plane wave
/// e^{2 pi i (k x + m y)}:
///   (2/d^2)(1 - cos((2 pi k + p) d)) + (2/d^2)(1 - cos((2 pi m - q) d)),
/// d = 1/N. This is the no-hole oracle; p and q are taken raw.
double discrete_dispersion(int k, int m, double p, double q, int N);

/// 5-point stencil with Peierls link phases on the perforated torus cell.
/// The pattern is fixed by the grid; fill() rewrites values for a new raw
/// phase pair, which is what the time-dependent integrator iterates on.
class CellStencil {
public:
    explicit CellStencil(const CellGrid& grid);

    const CellGrid& grid() const { return *grid_; }

    /// B(p, q): Hermitian, nonnegative; -e^{+-ip d}/d^2 on x links,
    /// -e^{-+iq d}/d^2 on y links, 4/d^2 on the diagonal.
    void fill(double p, double q, SparseMatrix& M) const;

    /// I + half_dt * B(p, q), the Crank-Nicolson left-hand matrix.
    void fill_cn_lhs(double p, double q, double half_dt, SparseMatrix& M) const;

    SparseMatrix assemble(double p, double q) const;
    SparseMatrix pattern_matrix() const { return empty_; }

private:
    const CellGrid* grid_;
    SparseMatrix empty_; // pattern with zero values
    // per-slot multiplicity of each hop type: +x, -x, +y, -y, diagonal
    std::vector<std::array<std::int8_t, 5>> terms_;
};

/// Gauge-transformed cell fiber operator at raw phases (p, q).
SparseMatrix assemble_cell_bloch(const CellGrid& grid, const BlochPhases& phases);

/// Truncated-strip Bloch-Torrey operator -Lap_h + i g x with y-quasimomentum
/// q: Dirichlet at the strip ends, periodic y wrap with link phases, i g x_j
/// on the diagonal.
SparseMatrix assemble_strip_bt(const CellGrid& grid, double g, double q);

/// Plane wave e^{2 pi i (k x + m y)} restricted to the active DOFs.
cvector make_plane_wave(const CellGrid& grid, int k, int m);

/// Physical and numerical parameters of one monodromy computation.
struct ProblemConfig {
    double g = 1.0;       // gradient strength, > 0
    double q = 0.0;       // y-quasimomentum
    double p0 = 0.0;      // initial x-Floquet parameter
    HoleShape shape;
    int N = 64;           // grid points per cell side
    int Nt = 0;           // CN steps per period; 0 -> default_nt()
    int s = 1;            // periods composed in the monodromy
    int arnoldi_m = 30;
    double arnoldi_tol = 1e-9;
    std::uint64_t seed = 1;
    double solver_tol = 1e-12;
    int solver_maxit = 4000;

    double t_g() const { return 2.0 * PI / g; }
    int steps_per_period() const { return Nt > 0 ? Nt : default_nt(); }

    /// max(64, ceil(32 t_g g)) = max(64, ceil(64 pi)) rounded up to the next
    /// power of two: 256 steps per period.
    static int default_nt() { return 256; }

    void validate() const;
};

} // namespace btspec
