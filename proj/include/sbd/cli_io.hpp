#pragma once

/**
 * @file cli_io.hpp
 * @brief Run configuration files, result writers and the command-line driver.
 *
 * Configuration files are sectioned key/value text:
 *
 *     # comment
 *     [run]
 *     scenario = mms-full
 *     [geometry]
 *     nx = 20
 *     [bc]
 *     ff_right = traction(0, 0)
 *
 * Values are numbers, bare words, quoted strings, whitespace-separated
 * lists, or boundary expressions `kind` / `kind(arg, ...)`. Unknown sections
 * and keys are errors.
 */

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sbd/core.hpp"
#include "sbd/grid.hpp"
#include "sbd/problem.hpp"
#include "sbd/solution.hpp"
#include "sbd/solver.hpp"

namespace sbd {

enum class Scenario { MmsFull, MmsReduced, Filtration, Custom };
std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& name);

/// One boundary segment as written in the [bc] section. `function` names a
/// built-in data function ("exact" or "parabola"); otherwise `values` holds
/// the constant data.
struct BcSetting {
    std::string kind;
    std::string function;
    std::vector<double> values;

    bool operator==(const BcSetting&) const = default;
};

struct RunConfig {
    Scenario scenario = Scenario::MmsFull;
    Model model = Model::Full;
    GeometryConfig geometry{};
    PhysicalParams params{};
    ClosureProfile profile = ClosureProfile::quadratic();
    /// Reduced manufactured solution: absorb the closure defect in the interface data.
    bool closure_defect = false;
    /// Segment name -> setting; only used by the custom scenario.
    std::map<std::string, BcSetting> bc;
    /// Cells in x per level. Empty: a single run on `geometry`. The number
    /// of y cells follows the nx : ny ratio of `geometry`.
    std::vector<int> levels;
    SolveMethod method = SolveMethod::DirectLU;
    double tol = 1e-10;
    std::string output = "out";

    bool operator==(const RunConfig&) const = default;
};

/// Segment names accepted in the [bc] section.
const std::vector<std::string>& bc_segments();

/// Problems are reported as "<file>:<line>: <section.key>: <message>".
/// Throws ValidationError carrying every problem found.
RunConfig parse_config(std::istream& in, const std::string& source_name = "<config>");
RunConfig parse_config_file(const std::filesystem::path& path);
void serialize_config(const RunConfig& config, std::ostream& os);

/// Semantic checks that need the whole config (geometry conformity, named
/// functions, scenario/model agreement). Returns one message per problem.
std::vector<std::string> check_config(const RunConfig& config);

/// Translates the [bc] section. Unset segments are no-slip (Stokes) or
/// no-flow (Darcy); unset interface ends are V = 0.
BoundarySpec build_boundary_spec(const RunConfig& config);
GammaBoundarySpec build_gamma_spec(const RunConfig& config);

/// Legacy ASCII STRUCTURED_POINTS file on the (nx+1) x (ny+1) node lattice:
/// pressure as cell data, velocity interpolated to the nodes as point data.
/// Darcy velocities are recovered from the pressure gradient. In the reduced
/// model the free flow is drawn without the removed strip.
void write_vtk(const Solution& solution, const PhysicalParams& params, std::ostream& os);
void write_vtk(const Solution& solution, const PhysicalParams& params, const std::filesystem::path& path);

/// Columns s, U, V, P (tangential, normal average velocity, average pressure).
void write_gamma_csv(const Solution& reduced, std::ostream& os);

/// Output directory: SBD_OUTPUT_DIR when set, otherwise `fallback`.
std::filesystem::path output_directory(const std::string& fallback);

/// Executes the pipeline of a config, writing into `out`.
void execute_config(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// Command-line entry point. Exit codes: 0 success, 1 validation or usage
/// error, 2 solver failure.
int run_cli(int argc, char** argv);

}  // namespace sbd
