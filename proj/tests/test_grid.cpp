#include <doctest.h>

#include "sbd/grid.hpp"

using namespace sbd;

TEST_CASE("full grid layout and unknown count") {
    const StaggeredGrid g = build_grid({1.0, 2.0, 0.9, 1.1, 10, 20}, Model::Full);
    CHECK(g.pm_rows() == 9);
    CHECK(g.tr_rows() == 2);
    CHECK(g.ff_rows() == 9);
    CHECK(g.region_of_row(8) == Region::Darcy);
    CHECK(g.region_of_row(9) == Region::Transition);
    CHECK(g.region_of_row(11) == Region::FreeFlow);
    // u: 11 faces x 11 rows, v: 10 x 12, p: 10 x 20
    CHECK(dof_count(g) == 121 + 120 + 200);
}

TEST_CASE("reduced grid removes the strip and adds three interface unknowns per column") {
    const double d = 5e-4;
    const StaggeredGrid g = build_grid({1.0, 1.0 + d, 0.5, 0.5 + d, 10, 10}, Model::Reduced);
    CHECK(g.pm_rows() == 5);
    CHECK(g.tr_rows() == 0);
    CHECK(g.hy() == doctest::Approx(0.1));
    CHECK(g.cell_y(5) == doctest::Approx(0.55 + d));
    CHECK(g.stokes_face_y(5) == doctest::Approx(0.5 + d));
    CHECK(g.darcy_face_y(5) == doctest::Approx(0.5));
    CHECK(dof_count(g) == 55 + 60 + 100 + 30);
}

TEST_CASE("DofMap numbering is a bijection") {
    for (Model m : {Model::Full, Model::Reduced}) {
        const GeometryConfig c = m == Model::Full ? GeometryConfig{1.0, 2.0, 0.9, 1.1, 10, 20}
                                                  : GeometryConfig{1.0, 1.001, 0.5, 0.501, 10, 10};
        const StaggeredGrid g = build_grid(c, m);
        const DofMap dof(g);
        for (std::size_t k = 0; k < dof.size(); ++k) {
            const DofLocation l = dof.locate(k);
            std::size_t back = 0;
            switch (l.field) {
            case Field::U: back = dof.u(l.i, l.j); break;
            case Field::V: back = dof.v(l.i, l.j); break;
            case Field::P: back = dof.p(l.i, l.j); break;
            case Field::GammaVn: back = dof.gamma_vn(l.i); break;
            case Field::GammaVt: back = dof.gamma_vt(l.i); break;
            case Field::GammaP: back = dof.gamma_p(l.i); break;
            }
            REQUIRE(back == k);
        }
    }
}

TEST_CASE("grid construction rejects bad geometry") {
    CHECK_THROWS_WITH_AS(build_grid({1.0, 2.0, 1.2, 1.1, 10, 20}, Model::Full), doctest::Contains("d must be positive"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(build_grid({1.0, 2.0, 0.9, 1.1, 16, 32}, Model::Full),
                         doctest::Contains("not a multiple of hy"), ValidationError);
    CHECK_THROWS_AS(build_grid({1.0, 2.0, 0.9, 1.1, 1, 20}, Model::Full), ValidationError);
    CHECK_THROWS_AS(build_grid({-1.0, 2.0, 0.9, 1.1, 10, 20}, Model::Full), ValidationError);
    CHECK_THROWS_AS(build_grid({1.0, 2.0, 0.9, 2.5, 10, 20}, Model::Full), ValidationError);
    // the transition zone must hold at least one cell row
    CHECK_THROWS_AS(build_grid({1.0, 2.0, 0.9, 0.95, 10, 20}, Model::Full), ValidationError);
}
