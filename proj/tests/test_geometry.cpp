#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "btspec/geometry.hpp"

#include <cmath>

using namespace btspec;

TEST_CASE("signed distance conventions") {
    HoleShape disk = HoleShape::disk(0.25);
    CHECK(signed_distance(disk, 0.0, 0.0) == doctest::Approx(-0.25));
    CHECK(signed_distance(disk, 0.25, 0.0) == doctest::Approx(0.0));
    CHECK(signed_distance(disk, 0.3, 0.4) > 0.0);

    HoleShape ell = HoleShape::ellipse(0.3, 0.2);
    CHECK(signed_distance(ell, 0.3, 0.0) == doctest::Approx(0.0));
    CHECK(signed_distance(ell, 0.0, 0.0) < 0.0);
    CHECK(signed_distance(ell, 0.0, 0.25) > 0.0);

    CHECK(signed_distance(HoleShape::none(), 0.0, 0.0) > 0.0);
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(HoleShape::disk(0.5), Error);
    CHECK_THROWS_AS(HoleShape::disk(0.0), Error);
    CHECK_THROWS_AS(HoleShape::ellipse(0.5, 0.2), Error);
    CHECK_THROWS_AS(HoleShape::ellipse(0.3, -0.1), Error);
}

TEST_CASE("cell grid masking: N=4 disk r=0.25") {
    CellGrid g = build_cell_grid(4, HoleShape::disk(0.25));
    CHECK(g.total_points() == 16);
    CHECK(g.masked_count() == 4);
    CHECK(g.active_count() == 12);

    // independent enumeration of the 16 centers
    int masked = 0;
    for (int ix = 0; ix < 4; ++ix)
        for (int iy = 0; iy < 4; ++iy) {
            double x = -0.5 + (ix + 0.5) * 0.25, y = -0.5 + (iy + 0.5) * 0.25;
            bool inside = std::sqrt(x * x + y * y) <= 0.25;
            if (inside) ++masked;
            CHECK(g.is_masked(ix, iy) == inside);
        }
    CHECK(masked == 4);
}

TEST_CASE("cell grid: no hole and rejection rules") {
    CellGrid g = build_cell_grid(4, HoleShape::none());
    CHECK(g.active_count() == 16);
    CHECK(g.masked_count() == 0);

    // N=2 masks nothing (centers at distance ~0.354 > 0.25) but is still
    // rejected by the minimum-N resolution rule
    CHECK_THROWS_AS(build_cell_grid(2, HoleShape::disk(0.25)), Error);
    CHECK_THROWS_AS(build_cell_grid(1, HoleShape::none()), Error);
    CHECK_NOTHROW(build_cell_grid(2, HoleShape::none()));
    CHECK_NOTHROW(build_cell_grid(2, HoleShape::disk(0.2)));
}

TEST_CASE("strip grid: counts and topology") {
    CellGrid g = build_strip_grid(4, 1, HoleShape::disk(0.25));
    CHECK(g.total_points() == 48);
    CHECK(g.masked_count() == 12);
    CHECK(g.active_count() == 36);

    CellGrid h = build_strip_grid(8, 2, HoleShape::none());
    CHECK(h.active_count() == 320);

    CellGrid single = build_strip_grid(4, 0, HoleShape::disk(0.25));
    CHECK(single.topology == GridTopology::dirichlet_strip);
    CHECK(single.total_points() == 16);
    CHECK(single.masked_count() == 4);
}

TEST_CASE("strip masks are cell-0 translates") {
    CellGrid strip = build_strip_grid(8, 2, HoleShape::ellipse(0.3, 0.2));
    CellGrid cell = build_cell_grid(8, HoleShape::ellipse(0.3, 0.2));
    for (int c = 0; c < 5; ++c)
        for (int jx = 0; jx < 8; ++jx)
            for (int iy = 0; iy < 8; ++iy)
                CHECK(strip.is_masked(c * 8 + jx, iy) == cell.is_masked(jx, iy));
}

TEST_CASE("active index maps are inverse bijections") {
    for (const auto& g : {build_cell_grid(8, HoleShape::disk(0.25)),
                          build_strip_grid(6, 1, HoleShape::ellipse(0.2, 0.3))}) {
        int covered = 0;
        for (int k = 0; k < g.active_count(); ++k) {
            auto [ix, iy] = g.point_of_active(k);
            CHECK(g.active_index(ix, iy) == k);
            ++covered;
        }
        CHECK(covered == g.active_count());
        CHECK(g.active_count() + g.masked_count() == g.total_points());
    }
}

TEST_CASE("mask symmetry under the hole reflections") {
    for (const auto& shape : {HoleShape::disk(0.25), HoleShape::ellipse(0.35, 0.15)}) {
        CellGrid g = build_cell_grid(16, shape);
        for (int ix = 0; ix < 16; ++ix)
            for (int iy = 0; iy < 16; ++iy) {
                CHECK(g.is_masked(ix, iy) == g.is_masked(15 - ix, iy));
                CHECK(g.is_masked(ix, iy) == g.is_masked(ix, 15 - iy));
            }
    }
}

TEST_CASE("masked count quadruples under refinement") {
    HoleShape disk = HoleShape::disk(0.25);
    for (int N : {16, 32, 64}) {
        double m1 = build_cell_grid(N, disk).masked_count();
        double m2 = build_cell_grid(2 * N, disk).masked_count();
        CHECK(std::abs(m2 / m1 - 4.0) <= 8.0 / std::sqrt(m1));
    }
}

TEST_CASE("cell coordinates avoid seams") {
    CellGrid g = build_cell_grid(8, HoleShape::none());
    for (int ix = 0; ix < 8; ++ix) {
        CHECK(std::abs(g.x_coord(ix)) < 0.5);
        CHECK(g.x_coord(ix) == doctest::Approx(-0.5 + (ix + 0.5) / 8.0));
    }
    CellGrid s = build_strip_grid(8, 2, HoleShape::none());
    CHECK(s.x_coord(0) == doctest::Approx(-2.5 + 0.5 / 8.0));
    CHECK(s.x_coord(s.nx - 1) == doctest::Approx(2.5 - 0.5 / 8.0));
}
