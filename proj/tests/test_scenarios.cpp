#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "sbd/scenarios.hpp"

using namespace sbd;

TEST_CASE("inflow profile values and total flux") {
    CHECK(filtration_inflow(0.5) == doctest::Approx(0.00625));
    CHECK(filtration_inflow(0.25) == 0.0);
    CHECK(filtration_inflow(0.75) == 0.0);
    CHECK(filtration_inflow(0.1) == 0.0);
    CHECK(filtration_inflow(0.9) == 0.0);
    // 0.1 * 0.5^3 / 6
    CHECK(oracle::simpson(filtration_inflow, 0.25, 0.75) == doctest::Approx(0.1 * 0.125 / 6.0).epsilon(1e-12));
}

TEST_CASE("filtration geometry must resolve the layers") {
    FiltrationConfig c;
    const GeometryConfig full = filtration_geometry(c, Model::Full);
    CHECK(full.nx == 200);
    CHECK(full.ny == 201);
    CHECK(filtration_geometry(c, Model::Reduced).ny == 200);
    c.h = 1.0 / 100.0;
    CHECK_THROWS_AS(filtration_geometry(c, Model::Full), ValidationError);
}

namespace {

// Full layout with two transition rows, filled with affine fields.
Solution affine_solution(double a, double b) {
    const StaggeredGrid g = build_grid({1.0, 1.0, 0.4, 0.6, 10, 10}, Model::Full);
    const DofMap dof(g);
    Vector x(dof.size());
    for (std::size_t k = 0; k < dof.size(); ++k) {
        const DofLocation l = dof.locate(k);
        const double y = l.field == Field::V ? g.stokes_face_y(l.j) : g.cell_y(l.j);
        x[k] = a + b * y + (l.field == Field::P ? 1.0 : 0.0);
    }
    return Solution(g, x);
}

}  // namespace

TEST_CASE("transition averages are exact for constant and affine fields") {
    for (double b : {0.0, 2.5}) {
        const GammaAverages avg = average_full_across_transition(affine_solution(1.5, b));
        REQUIRE(avg.u.size() == 10);
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(avg.u[i] == doctest::Approx(1.5 + 0.5 * b));
            CHECK(avg.v[i] == doctest::Approx(1.5 + 0.5 * b));
            CHECK(avg.p[i] == doctest::Approx(2.5 + 0.5 * b));
        }
    }
}

TEST_CASE("relative deviations") {
    GammaAverages a{{1.0, 2.0}, {3.0, 4.0}, {0.0, 0.0}};
    GammaAverages b{{1.1, 2.2}, {3.0, 4.0}, {1.0, 1.0}};
    const Deviations d = relative_deviations(a, b);
    CHECK(d.eps_u == doctest::Approx(0.1));
    CHECK(d.eps_v == 0.0);
    CHECK(std::isnan(d.eps_p));
    b.u.pop_back();
    CHECK_THROWS_AS(relative_deviations(a, b), ValidationError);
}

TEST_CASE("profiles are extracted on grid lines only") {
    const Solution s = affine_solution(0.0, 1.0);
    const LineProfile lp = extract_profile(s, 0.8);
    CHECK(lp.x.size() == 10);
    CHECK(lp.u[3] == doctest::Approx(0.8));
    CHECK(lp.v[3] == doctest::Approx(0.8));
    // the bottom Stokes line uses a one-sided extrapolation, exact for affine data
    CHECK(extract_profile(s, 0.4).u[0] == doctest::Approx(0.4));
    CHECK_THROWS_AS(extract_profile(s, 0.83), ValidationError);
}

TEST_CASE("filtration conserves mass and writes both tables") {
    const FiltrationReport rep = run_filtration({}, {ClosureProfile::quadratic()});
    CHECK(filtration_mass_imbalance(rep.full.solution) <= 5e-3);
    CHECK(filtration_mass_imbalance(rep.runs.front().reduced.solution) <= 5e-3);
    std::ostringstream dv, pr;
    write_deviations_csv(rep, dv);
    write_profile_csv(rep, pr);
    CHECK(dv.str().rfind("profile,eps_u,eps_v,eps_p,cpu_full_s,cpu_reduced_s\nquadratic,", 0) == 0);
    const std::string prof = pr.str();
    CHECK(std::count(prof.begin(), prof.end(), '\n') == 201);
    CHECK(rep.runs.front().deviations.eps_u > 0.0);
}
