#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sbd/cli_io.hpp"
#include "sbd/verification.hpp"

using namespace sbd;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ValidationError& e) {
        return e.problems();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("a minimal config takes the documented defaults") {
    const RunConfig c = parse("[run]\nscenario = mms-full\n");
    CHECK(c.method == SolveMethod::DirectLU);
    CHECK(c.tol == 1e-10);
    CHECK(c.model == Model::Full);
    CHECK(c.geometry == mms_geometry(Model::Full, 10));
    CHECK(c.params == mms_params());
    CHECK(parse("") == c);
}

TEST_CASE("profile names select the tabulated constants") {
    const RunConfig c = parse("[run]\nscenario = mms-reduced\n[closure]\nprofile = \"quadratic\"\n");
    CHECK(c.profile.lambda1 == 4.0);
    CHECK(c.profile.lambda2 == 2.0);
    const RunConfig l = parse("[run]\nscenario = mms-reduced\n[closure]\nprofile = linear\n");
    CHECK(closure_params(l.profile) == std::array<double, 2>{2.0, 0.0});
    const RunConfig k = parse("[run]\nscenario = mms-reduced\n[closure]\nprofile = custom\nlambda1 = 5\nlambda2 = 1\n");
    CHECK(k.profile == ClosureProfile::custom(5.0, 1.0));
}

TEST_CASE("diagnostics carry file, line and key path") {
    const auto p = problems_of("[run]\nscenario = mms-full\n[geometry]\ny_gamma_pm = 1.2\ny_gamma_ff = 1.1\n");
    REQUIRE(p.size() == 1);
    CHECK(any_contains(p, "d must be positive"));
    CHECK(any_contains(p, "test.cfg:4: geometry"));

    const auto q = problems_of("[geometry]\nnxx = 3\n[params]\nmu = abc\n[nope]\n# comment\n[solver]\ntol = -1\n");
    CHECK(any_contains(q, "test.cfg:2: geometry.nxx: unknown key"));
    CHECK(any_contains(q, "test.cfg:4: params.mu: 'abc' is not a number"));
    CHECK(any_contains(q, "test.cfg:5: nope: unknown section"));
}

TEST_CASE("semantic errors are reported against the offending key") {
    CHECK(any_contains(problems_of("[solver]\ntol = -1\n"), "test.cfg:2: solver.tol: tolerance must be positive"));
    CHECK(any_contains(problems_of("[run]\nscenario = mms-full\nmodel = reduced\n"), "run.model"));
    CHECK(any_contains(problems_of("[params]\nK_tr = 1 2 1\n"), "K_tr not SPD"));
    CHECK(any_contains(problems_of("[grids]\nnx = 10 20\n"), "at least three levels"));
    CHECK(any_contains(problems_of("[grids]\nnx = 10 20 30\n"), "double"));
    CHECK(any_contains(problems_of("[run]\nscenario = custom\n[bc]\nff_left = traction(exact)\n"),
                       "unknown function 'exact'"));
    CHECK(any_contains(problems_of("[run]\nscenario = custom\n[bc]\npm_left = velocity(1, 2)\n"), "not allowed"));
    CHECK(any_contains(problems_of("[run]\nscenario = custom\n[bc]\npm_bottom = inflow(1, 2)\n"), "takes 1 value"));
    CHECK(any_contains(problems_of("[bc]\nff_left = no-slip\n"), "scenario custom only"));
    CHECK(any_contains(problems_of("[run]\nscenario = mms-full\nscenario = custom\n"), "duplicate key"));
    CHECK(any_contains(problems_of("[run]\nscenario = nonsense\n"), "unknown scenario"));
    CHECK(any_contains(problems_of("[closure]\nprofile = quadratic\nlambda1 = 3\n"), "fixed unless"));
    CHECK(any_contains(problems_of("[closure]\nprofile = custom\nlambda1 = 1\nlambda2 = 2\n"), "lambda1 > lambda2"));
}

TEST_CASE("serialize then parse reproduces the config") {
    std::vector<RunConfig> configs;
    configs.push_back(parse(""));
    configs.push_back(parse("[run]\nscenario = mms-reduced\nclosure_defect = true\n[grids]\nnx = 20 40 80\n"));
    configs.push_back(parse("[run]\nscenario = filtration\noutput = \"res dir\"\n[closure]\nprofile = piecewise-linear\n"
                            "[solver]\nmethod = krylov\ntol = 1e-9\n"));
    configs.push_back(parse("[run]\nscenario = custom\nmodel = reduced\n[geometry]\nLx = 1\nLy = 1.01\ny_gamma_pm = 0.5\n"
                            "y_gamma_ff = 0.51\nnx = 100\nny = 100\n[params]\nK_tr = 0.02 0.001 0.01\nbeta = 0.3\n"
                            "[closure]\nprofile = custom\nlambda1 = 3.7\nlambda2 = 0.1\n"
                            "[bc]\nff_left = velocity(0.1, -2.5e-3)\nff_right = do-nothing\npm_bottom = inflow(parabola)\n"
                            "pm_left = pressure(exact)\ngamma_left = neumann(0, 0.5)\n"));
    for (const RunConfig& c : configs) {
        std::ostringstream os;
        serialize_config(c, os);
        const RunConfig back = parse(os.str());
        CHECK(back == c);
        std::ostringstream again;
        serialize_config(back, again);
        CHECK(again.str() == os.str());
    }
}

TEST_CASE("boundary settings translate to boundary data") {
    const RunConfig c = parse("[run]\nscenario = custom\n[bc]\nff_right = do-nothing\nff_top = velocity(1, 2)\n"
                              "pm_bottom = inflow(parabola)\npm_left = flux(0.5)\n");
    const BoundarySpec b = build_boundary_spec(c);
    CHECK(b.ff_right.kind == StokesBC::Kind::Traction);
    CHECK(b.ff_top.data(0.3, 2.0) == Vec2{1.0, 2.0});
    CHECK(b.ff_left.kind == StokesBC::Kind::Velocity);
    CHECK(b.pm_bottom.data(0.5, 0.0) == doctest::Approx(-0.00625));
    CHECK(b.pm_left.data(0.0, 0.3) == 0.5);
    CHECK(b.pm_right.kind == DarcyBC::Kind::NormalFlux);
    CHECK(build_gamma_spec(c).left.kind == GammaEndBC::Kind::Dirichlet);
}

TEST_CASE("VTK output of zero fields has the documented layout") {
    const StaggeredGrid g = build_grid(mms_geometry(Model::Full, 10), Model::Full);
    const Solution s(g, Vector::Zero(dof_count(g)));
    std::ostringstream os;
    write_vtk(s, mms_params(), os);
    const std::string t = os.str();
    CHECK(t.find("DATASET STRUCTURED_POINTS\nDIMENSIONS 11 21 1\n") != std::string::npos);
    CHECK(t.find("CELL_DATA 200\nSCALARS p double 1\n") != std::string::npos);
    CHECK(t.find("POINT_DATA 231\nVECTORS velocity double\n") != std::string::npos);
    std::istringstream in(t.substr(t.find("VECTORS velocity double\n") + 24));
    int lines = 0;
    for (std::string l; std::getline(in, l); ++lines) CHECK(l == "0 0 0");
    CHECK(lines == 231);
}

TEST_CASE("VTK and interface CSV output are deterministic") {
    MmsProblem pb = build_mms_problem(Model::Reduced, mms_geometry(Model::Reduced, 10), mms_params());
    const Solution s(pb.grid, sample_exact(pb.grid, pb.exact));
    std::ostringstream a, b, c;
    write_vtk(s, mms_params(), a);
    write_vtk(s, mms_params(), b);
    CHECK(a.str() == b.str());
    write_gamma_csv(s, c);
    const std::string csv = c.str();
    CHECK(csv.rfind("s,U,V,P\n0.050000000000000003,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("the output directory can be overridden from the environment") {
    ::unsetenv("SBD_OUTPUT_DIR");
    CHECK(output_directory("fallback") == std::filesystem::path("fallback"));
    ::setenv("SBD_OUTPUT_DIR", "/tmp/sbd-env-out", 1);
    CHECK(output_directory("fallback") == std::filesystem::path("/tmp/sbd-env-out"));
    ::unsetenv("SBD_OUTPUT_DIR");
}

TEST_CASE("command-line exit codes") {
    const auto dir = std::filesystem::temp_directory_path() / "sbd_cli_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto run = [](std::vector<std::string> args) {
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return run_cli(static_cast<int>(argv.size()), argv.data());
    };
    const std::string out = (dir / "conv").string();
    CHECK(run({"sbdflow", "converge-full", "--levels", "3", "--base", "10", "--out", out}) == 0);
    CHECK(std::filesystem::exists(dir / "conv" / "convergence_full.csv"));

    const auto bad = dir / "bad.cfg";
    std::ofstream(bad) << "[geometry]\ny_gamma_pm = 1.2\ny_gamma_ff = 1.1\n";
    CHECK(run({"sbdflow", "run", "--config", bad.string()}) == 1);
    CHECK(run({"sbdflow", "converge-full", "--base", "16", "--out", out}) == 1);
    CHECK(run({"sbdflow", "no-such-command"}) == 1);

    // a tolerance no solver can meet is a solver failure
    const auto strict = dir / "strict.cfg";
    std::ofstream(strict) << "[run]\noutput = \"" << (dir / "strict").string() << "\"\n[solver]\ntol = 1e-30\n";
    CHECK(run({"sbdflow", "run", "--config", strict.string()}) == 2);

    const auto red = dir / "red.cfg";
    std::ofstream(red) << "[run]\nscenario = mms-reduced\noutput = \"" << (dir / "red").string() << "\"\n";
    CHECK(run({"sbdflow", "run", "--config", red.string()}) == 0);
    CHECK(std::filesystem::exists(dir / "red" / "gamma_fields.csv"));
    CHECK(std::filesystem::exists(dir / "red" / "solution.vtk"));
    std::filesystem::remove_all(dir);
}
