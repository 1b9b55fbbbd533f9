#pragma once

#include "btspec/types.hpp"

namespace btspec {

/// Hole cut out of each unit cell, centered at the cell origin. Disk and
/// ellipse are strictly convex with smooth boundary and must fit strictly
/// inside the open cell (-1/2,1/2)^2.
struct HoleShape {
    enum class Kind { none, disk, ellipse };
    Kind kind = Kind::none;
    double r = 0.0; // disk radius, cell units
    double a = 0.0; // ellipse semi-axis along x
    double b = 0.0; // ellipse semi-axis along y

    static HoleShape none() { return {}; }
    static HoleShape disk(double r);
    static HoleShape ellipse(double a, double b);

    /// Largest x-extent of the hole (the quasimode attachment point).
    double max_x_extent() const;
    bool has_hole() const { return kind != Kind::none; }
};

/// Negative inside the hole, zero on the boundary, positive outside. Exact
/// distance for the disk; exact sign (implicit function) for the ellipse.
double signed_distance(const HoleShape& shape, double x, double y);

enum class GridTopology { torus_cell, dirichlet_strip };

/// Masked uniform grid, cell-centered: x_j = -1/2 + (j+1/2)/N per cell, so no
/// point sits on a cell seam. Masked points (inside or on a hole boundary)
/// carry no degree of freedom. Immutable after construction.
class CellGrid {
public:
    int N = 0;                 // points per cell side
    int L = 0;                 // strip half-width in cells (strip only)
    GridTopology topology = GridTopology::torus_cell;
    HoleShape shape;
    int nx = 0;                // grid points along x: N (cell) or (2L+1)N (strip)
    int ny = 0;                // grid points along y: N

    double delta() const { return 1.0 / N; }
    int total_points() const { return nx * ny; }
    int active_count() const { return static_cast<int>(active_to_point_.size()); }
    int masked_count() const { return total_points() - active_count(); }

    double x_coord(int ix) const;
    double y_coord(int iy) const;

    bool is_masked(int ix, int iy) const { return point_to_active_[point_index(ix, iy)] < 0; }
    int point_index(int ix, int iy) const { return ix * ny + iy; }

    /// Active DOF index for a grid point, -1 if masked.
    int active_index(int ix, int iy) const { return point_to_active_[point_index(ix, iy)]; }
    /// Grid point (ix, iy) of an active DOF.
    std::pair<int, int> point_of_active(int k) const;

    /// x coordinate per active DOF, in DOF order (used by gauge diagonals).
    const std::vector<double>& active_x() const { return active_x_; }

    friend CellGrid build_cell_grid(int N, const HoleShape& shape);
    friend CellGrid build_strip_grid(int N, int L, const HoleShape& shape);

private:
    std::vector<int> point_to_active_; // -1 where masked
    std::vector<int> active_to_point_;
    std::vector<double> active_x_;
    void index_points();
    static CellGrid build(int N, int L, GridTopology topo, const HoleShape& shape);
};

/// One fundamental cell of the perforated torus. Throws on under-resolved
/// holes (N < 4 with hole extent >= 0.25) or a disconnected active set.
CellGrid build_cell_grid(int N, const HoleShape& shape);

/// Truncated strip of 2L+1 cells: Dirichlet at the two x extremes, periodic
/// wrap in y, hole mask repeated per cell.
CellGrid build_strip_grid(int N, int L, const HoleShape& shape);

} // namespace btspec
