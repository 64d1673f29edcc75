#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sbd/verification.hpp"

using namespace sbd;

TEST_CASE("observed orders of an exact power law") {
    const std::vector<double> h{0.1, 0.05, 0.025};
    const std::vector<double> e{3e-2, 7.5e-3, 1.875e-3};
    const OrderTable t = observed_orders(h, e);
    REQUIRE(t.pairwise.size() == 2);
    CHECK(t.pairwise[0] == doctest::Approx(2.0));
    CHECK(t.pairwise[1] == doctest::Approx(2.0));
    CHECK(t.slope == doctest::Approx(2.0));
    CHECK_FALSE(t.undefined);
}

TEST_CASE("a zero error makes the order undefined instead of infinite") {
    const OrderTable t = observed_orders({0.1, 0.05, 0.025}, {1e-3, 0.0, 1e-5});
    CHECK(t.undefined);
    CHECK(std::isnan(t.slope));
    CHECK(std::isnan(t.pairwise[0]));
}

TEST_CASE("l2_error weights squared differences") {
    CHECK(l2_error({1.0, 2.0}, {1.0, 4.0}, 0.25) == doctest::Approx(1.0));
    CHECK_THROWS_AS(l2_error({1.0}, {1.0, 2.0}, 1.0), ValidationError);
}

TEST_CASE("convergence studies need three nested grids") {
    const GeometryConfig a = mms_geometry(Model::Full, 10), b = mms_geometry(Model::Full, 20),
                         c = mms_geometry(Model::Full, 30);
    CHECK_THROWS_AS(convergence_study(Model::Full, {a, b}, mms_params()), ValidationError);
    CHECK_THROWS_WITH_AS(convergence_study(Model::Full, {a, b, c}, mms_params()), doctest::Contains("not nested"),
                         ValidationError);
}

TEST_CASE("sampling a field that does not exist on the grid fails") {
    MmsProblem pb = build_mms_problem(Model::Reduced, mms_geometry(Model::Reduced, 10), mms_params());
    const Solution s(pb.grid, sample_exact(pb.grid, pb.exact));
    CHECK_THROWS_AS(sample_field(s, FieldId::UTR, pb.exact), ValidationError);
    const FieldSample fs = sample_field(s, FieldId::U, pb.exact);
    CHECK(l2_error(fs.numeric, fs.exact, fs.weight) == 0.0);
}

TEST_CASE("a short convergence study reports second order and a well-formed CSV") {
    std::vector<GeometryConfig> grids;
    for (int n : {10, 20, 40}) grids.push_back(mms_geometry(Model::Full, n));
    const ConvergenceReport rep = convergence_study(Model::Full, grids, mms_params());
    for (const auto& [f, o] : rep.orders) CHECK(o.slope == doctest::Approx(2.0).epsilon(0.1));
    std::ostringstream os;
    write_convergence_csv(rep, os);
    const std::string csv = os.str();
    CHECK(csv.rfind("h,field,error,order\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 7);
}

TEST_CASE("the exact solution leaves a small consistency residual") {
    const GeometryConfig g = mms_geometry(Model::Full, 20);
    MmsProblem pb = build_mms_problem(Model::Full, g, mms_params());
    const double r = consistency_residual(pb.grid, pb.system, sample_exact(pb.grid, pb.exact));
    CHECK(r < 1e-2);
    CHECK(r > 0.0);
}
