#include "btspec/operators.hpp"

#include <array>
#include <cmath>

namespace btspec {

double wrap_to_2pi(double phase) {
    double w = std::fmod(phase, 2.0 * PI);
    if (w < 0.0) w += 2.0 * PI;
    return w;
}

BlochPhases::BlochPhases(double p_raw, double q_raw)
    : p(wrap_to_2pi(p_raw)), q(wrap_to_2pi(q_raw)) {}

double discrete_dispersion(int k, int m, double p, double q, int N) {
    const double d = 1.0 / N;
    const double two_over_d2 = 2.0 * N * static_cast<double>(N);
    return two_over_d2 * (1.0 - std::cos((2.0 * PI * k + p) * d)) +
           two_over_d2 * (1.0 - std::cos((2.0 * PI * m - q) * d));
}

namespace {

enum HopType { hop_xp = 0, hop_xm, hop_yp, hop_ym, hop_diag };

// neighbor of (ix, iy) for a hop, honoring the grid topology; returns the
// active index or -1 (masked or Dirichlet end)
int hop_neighbor(const CellGrid& g, int ix, int iy, int hop) {
    int jx = ix, jy = iy;
    switch (hop) {
        case hop_xp: ++jx; break;
        case hop_xm: --jx; break;
        case hop_yp: ++jy; break;
        case hop_ym: --jy; break;
        default: break;
    }
    if (jy < 0) jy += g.ny;
    if (jy >= g.ny) jy -= g.ny;
    if (jx < 0 || jx >= g.nx) {
        if (g.topology == GridTopology::torus_cell) jx = (jx + g.nx) % g.nx;
        else return -1;
    }
    return g.active_index(jx, jy);
}

} // namespace

CellStencil::CellStencil(const CellGrid& grid) : grid_(&grid) {
    if (grid.topology != GridTopology::torus_cell)
        throw Error("CellStencil: torus-cell grid required");

    const int n = grid.active_count();
    SparseBuilder pattern(n);
    // triplets with the hop type smuggled through the value; merged slots
    // are recovered below by re-walking the hops
    for (int i = 0; i < n; ++i) {
        auto [ix, iy] = grid.point_of_active(i);
        pattern.add(i, i, 1.0);
        for (int hop = 0; hop < 4; ++hop) {
            int j = hop_neighbor(grid, ix, iy, hop);
            if (j >= 0) pattern.add(i, j, 1.0);
        }
    }
    empty_ = pattern.build();
    for (auto& v : empty_.vals()) v = 0.0;

    terms_.assign(empty_.nnz(), {0, 0, 0, 0, 0});
    const auto& rp = empty_.row_ptr();
    const auto& cols = empty_.cols();
    for (int i = 0; i < n; ++i) {
        auto [ix, iy] = grid.point_of_active(i);
        auto slot_of = [&](int col) {
            for (int k = rp[i]; k < rp[i + 1]; ++k)
                if (cols[k] == col) return k;
            throw Error("CellStencil: pattern slot missing");
        };
        terms_[slot_of(i)][hop_diag] += 1;
        for (int hop = 0; hop < 4; ++hop) {
            int j = hop_neighbor(grid, ix, iy, hop);
            if (j >= 0) terms_[slot_of(j)][hop] += 1;
        }
    }
}

void CellStencil::fill(double p, double q, SparseMatrix& M) const {
    const double d = grid_->delta();
    const double inv_d2 = 1.0 / (d * d);
    const cdouble cxp = -std::polar(inv_d2, p * d); // +x: -e^{+ipd}/d^2
    const cdouble cyp = -std::polar(inv_d2, -q * d); // +y: -e^{-iqd}/d^2
    // conjugate pairs taken bit-exactly so A is Hermitian to the last bit
    const std::array<cdouble, 5> coef = {
        cxp,
        std::conj(cxp),
        cyp,
        std::conj(cyp),
        cdouble(4.0 * inv_d2, 0.0),
    };
    if (M.n() != empty_.n() || M.nnz() != empty_.nnz()) M = empty_;
    cdouble* v = M.vals().data();
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        cdouble s = 0.0;
        for (int t = 0; t < 5; ++t)
            if (terms_[k][t]) s += static_cast<double>(terms_[k][t]) * coef[t];
        v[k] = s;
    }
}

void CellStencil::fill_cn_lhs(double p, double q, double half_dt, SparseMatrix& M) const {
    const double d = grid_->delta();
    const double w = half_dt / (d * d);
    const cdouble cxp = -std::polar(w, p * d);
    const cdouble cyp = -std::polar(w, -q * d);
    const std::array<cdouble, 5> coef = {
        cxp,
        std::conj(cxp),
        cyp,
        std::conj(cyp),
        cdouble(1.0 + 4.0 * w, 0.0),
    };
    if (M.n() != empty_.n() || M.nnz() != empty_.nnz()) M = empty_;
    cdouble* v = M.vals().data();
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        cdouble s = 0.0;
        for (int t = 0; t < 5; ++t)
            if (terms_[k][t]) s += static_cast<double>(terms_[k][t]) * coef[t];
        v[k] = s;
    }
}

SparseMatrix CellStencil::assemble(double p, double q) const {
    SparseMatrix M;
    fill(p, q, M);
    return M;
}

SparseMatrix assemble_cell_bloch(const CellGrid& grid, const BlochPhases& phases) {
    return CellStencil(grid).assemble(phases.p, phases.q);
}

SparseMatrix assemble_strip_bt(const CellGrid& grid, double g, double q) {
    if (grid.topology != GridTopology::dirichlet_strip)
        throw Error("assemble_strip_bt: dirichlet-strip grid required");

    q = wrap_to_2pi(q);
    const int n = grid.active_count();
    const double d = grid.delta();
    const double inv_d2 = 1.0 / (d * d);
    const cdouble cxp = -inv_d2, cxm = -inv_d2;
    const cdouble cyp = -std::polar(inv_d2, -q * d);
    const cdouble cym = std::conj(cyp);

    SparseBuilder b(n);
    for (int i = 0; i < n; ++i) {
        auto [ix, iy] = grid.point_of_active(i);
        b.add(i, i, cdouble(4.0 * inv_d2, 0.0) + cdouble(0.0, g * grid.x_coord(ix)));
        int j;
        if ((j = hop_neighbor(grid, ix, iy, hop_xp)) >= 0) b.add(i, j, cxp);
        if ((j = hop_neighbor(grid, ix, iy, hop_xm)) >= 0) b.add(i, j, cxm);
        if ((j = hop_neighbor(grid, ix, iy, hop_yp)) >= 0) b.add(i, j, cyp);
        if ((j = hop_neighbor(grid, ix, iy, hop_ym)) >= 0) b.add(i, j, cym);
    }
    return b.build();
}

cvector make_plane_wave(const CellGrid& grid, int k, int m) {
    cvector w(grid.active_count());
    for (int i = 0; i < grid.active_count(); ++i) {
        auto [ix, iy] = grid.point_of_active(i);
        w[i] = std::polar(1.0, 2.0 * PI * (k * grid.x_coord(ix) + m * grid.y_coord(iy)));
    }
    return w;
}

void ProblemConfig::validate() const {
    if (!(g > 0.0)) throw Error("config: g must be positive");
    if (N < 2) throw Error("config: N >= 2 required");
    if (steps_per_period() < 8) throw Error("config: Nt >= 8 required");
    if (s < 1) throw Error("config: s >= 1 required");
    if (arnoldi_m < 1) throw Error("config: arnoldi_m >= 1 required");
    if (!(arnoldi_tol > 0.0) || !(solver_tol > 0.0))
        throw Error("config: tolerances must be positive");
}

} // namespace btspec
