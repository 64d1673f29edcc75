#include <doctest.h>

#include "sbd/core.hpp"
#include "sbd/solver.hpp"

using namespace sbd;

namespace {

LinearSystem two_by_two() {
    // [2 1; 1 3] x = [3; 5]
    LinearSystem s(2);
    s.set_row(0, LinearForm::unknown(0, 2.0).add(1, 1.0) - 3.0);
    s.set_row(1, LinearForm::unknown(0, 1.0).add(1, 3.0) - 5.0);
    s.finalize();
    return s;
}

}  // namespace

TEST_CASE("direct LU solves the identity") {
    LinearSystem s(5);
    for (int k = 0; k < 5; ++k) s.set_row(k, LinearForm::unknown(k) - double(k + 1));
    s.finalize();
    const SolveReport r = solve(s, SolveMethod::DirectLU, 1e-12);
    for (int k = 0; k < 5; ++k) CHECK(r.x[k] == doctest::Approx(k + 1.0));
    CHECK(r.relative_residual <= 1e-12);
    CHECK(r.method == "direct-lu");
}

TEST_CASE("direct LU and Krylov agree on a 2x2 system") {
    const LinearSystem s = two_by_two();
    for (SolveMethod m : {SolveMethod::DirectLU, SolveMethod::Krylov}) {
        const SolveReport r = solve(s, m, 1e-12);
        CHECK(r.x[0] == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(r.x[1] == doctest::Approx(1.4).epsilon(1e-12));
    }
}

TEST_CASE("auto picks the direct solver below the threshold") {
    SolverOptions o;
    o.method = SolveMethod::Auto;
    CHECK(solve(two_by_two(), o).method == "direct-lu");
    o.direct_threshold = 1;
    CHECK(solve(two_by_two(), o).method == "krylov");
}

TEST_CASE("singular systems raise SolverError") {
    LinearSystem s(2);
    s.set_row(0, LinearForm::unknown(0, 1.0).add(1, 1.0) - 1.0);
    s.set_row(1, LinearForm::unknown(0, 2.0).add(1, 2.0) - 1.0);
    s.finalize();
    CHECK_THROWS_AS(solve(s, SolveMethod::DirectLU, 1e-10), SolverError);
}

TEST_CASE("solver method names round-trip") {
    for (SolveMethod m : {SolveMethod::DirectLU, SolveMethod::Krylov, SolveMethod::Auto})
        CHECK(parse_solve_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_solve_method("cholesky"), ValidationError);
}
