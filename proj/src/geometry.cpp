#include "btspec/geometry.hpp"

#include <cmath>
#include <deque>

namespace btspec {

HoleShape HoleShape::disk(double r) {
    if (!(r > 0.0 && r < 0.5))
        throw Error("HoleShape: disk radius must satisfy 0 < r < 1/2");
    HoleShape s;
    s.kind = Kind::disk;
    s.r = r;
    return s;
}

HoleShape HoleShape::ellipse(double a, double b) {
    if (!(a > 0.0 && a < 0.5 && b > 0.0 && b < 0.5))
        throw Error("HoleShape: ellipse semi-axes must satisfy 0 < a,b < 1/2");
    HoleShape s;
    s.kind = Kind::ellipse;
    s.a = a;
    s.b = b;
    return s;
}

double HoleShape::max_x_extent() const {
    switch (kind) {
        case Kind::disk: return r;
        case Kind::ellipse: return a;
        default: return 0.0;
    }
}

double signed_distance(const HoleShape& shape, double x, double y) {
    switch (shape.kind) {
        case HoleShape::Kind::disk:
            return std::sqrt(x * x + y * y) - shape.r;
        case HoleShape::Kind::ellipse: {
            double u = x / shape.a, v = y / shape.b;
            return u * u + v * v - 1.0;
        }
        default:
            return 1.0; // no hole: everything is outside
    }
}

double CellGrid::x_coord(int ix) const {
    // strip x runs over (-L-1/2, L+1/2); the cell alone over (-1/2, 1/2)
    double origin = topology == GridTopology::dirichlet_strip ? -(L + 0.5) : -0.5;
    return origin + (ix + 0.5) * delta();
}

double CellGrid::y_coord(int iy) const {
    return -0.5 + (iy + 0.5) * delta();
}

std::pair<int, int> CellGrid::point_of_active(int k) const {
    int p = active_to_point_[k];
    return {p / ny, p % ny};
}

void CellGrid::index_points() {
    active_to_point_.clear();
    active_x_.clear();
    for (int p = 0; p < total_points(); ++p) {
        if (point_to_active_[p] == 0) {
            point_to_active_[p] = static_cast<int>(active_to_point_.size());
            active_to_point_.push_back(p);
            active_x_.push_back(x_coord(p / ny));
        }
    }
}

namespace {

void check_resolution(int N, const HoleShape& shape) {
    if (N < 2) throw Error("grid: need N >= 2");
    double extent = shape.kind == HoleShape::Kind::ellipse ? std::max(shape.a, shape.b) : shape.r;
    if (shape.has_hole() && N < 4 && extent >= 0.25)
        throw Error("grid: N too small to resolve the hole (need N >= 4 for extent >= 0.25)");
}

// BFS over the active points with the grid's own adjacency; a split active
// set would make every discrete operator on it block-decouple silently.
void check_connectivity(const CellGrid& g) {
    const int n = g.active_count();
    if (n == 0) throw Error("grid: hole masks every point");
    std::vector<char> seen(n, 0);
    std::deque<int> queue;
    queue.push_back(0);
    seen[0] = 1;
    int found = 1;
    const bool wrap_x = g.topology == GridTopology::torus_cell;
    while (!queue.empty()) {
        int k = queue.front();
        queue.pop_front();
        auto [ix, iy] = g.point_of_active(k);
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int jx = ix + dx[d], jy = iy + dy[d];
            if (jy < 0) jy += g.ny;
            if (jy >= g.ny) jy -= g.ny;
            if (jx < 0 || jx >= g.nx) {
                if (!wrap_x) continue;
                jx = (jx + g.nx) % g.nx;
            }
            int a = g.active_index(jx, jy);
            if (a >= 0 && !seen[a]) {
                seen[a] = 1;
                ++found;
                queue.push_back(a);
            }
        }
    }
    if (found != n) throw Error("grid: active set is disconnected");
}

} // namespace

CellGrid CellGrid::build(int N, int L, GridTopology topo, const HoleShape& shape) {
    check_resolution(N, shape);
    if (L < 0) throw Error("grid: need L >= 0");

    CellGrid g;
    g.N = N;
    g.L = topo == GridTopology::dirichlet_strip ? L : 0;
    g.topology = topo;
    g.shape = shape;
    g.nx = topo == GridTopology::dirichlet_strip ? (2 * L + 1) * N : N;
    g.ny = N;
    g.point_to_active_.assign(g.total_points(), 0);

    if (shape.has_hole()) {
        for (int ix = 0; ix < g.nx; ++ix) {
            double x = g.x_coord(ix);
            double cx = std::round(x); // nearest hole translate (holes sit at integers)
            for (int iy = 0; iy < g.ny; ++iy) {
                double y = g.y_coord(iy);
                if (signed_distance(shape, x - cx, y) <= 0.0)
                    g.point_to_active_[g.point_index(ix, iy)] = -1;
            }
        }
    }
    g.index_points();
    check_connectivity(g);
    return g;
}

CellGrid build_cell_grid(int N, const HoleShape& shape) {
    return CellGrid::build(N, 0, GridTopology::torus_cell, shape);
}

CellGrid build_strip_grid(int N, int L, const HoleShape& shape) {
    return CellGrid::build(N, L, GridTopology::dirichlet_strip, shape);
}

} // namespace btspec
