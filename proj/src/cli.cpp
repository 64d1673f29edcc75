#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "sbd/cli_io.hpp"
#include "sbd/scenarios.hpp"
#include "sbd/verification.hpp"

namespace sbd {

namespace {

std::vector<ClosureProfile> profiles_from(const std::string& name) {
    if (name == "all") return {ClosureProfile::quadratic(), ClosureProfile::piecewise_linear(), ClosureProfile::linear()};
    const ProfileKind k = parse_profile_kind(name);
    const auto l = closure_params(k);
    return {ClosureProfile{k, l[0], l[1]}};
}

struct Common {
    std::string out;
    std::string method = "direct-lu";
    double tol = 1e-10;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out, "output directory (default: $SBD_OUTPUT_DIR or ./out)");
    cmd->add_option("--method", c.method, "direct-lu, krylov or auto")->capture_default_str();
    cmd->add_option("--tol", c.tol, "relative residual tolerance")->capture_default_str();
}

std::filesystem::path resolve_out(const Common& c, const std::string& fallback = "out") {
    return c.out.empty() ? output_directory(fallback) : std::filesystem::path(c.out);
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Coupled Stokes-Brinkman-Darcy flow: full and reduced interface models"};
    app.require_subcommand(1);

    Common common;
    int levels = 4, base = 10, h_inv = 200, nx = 10, repeats = 1;
    std::string profile = "quadratic", config_path, scenario = "mms-full", model = "full", matrix_file = "matrix.mtx";
    bool closure_defect = false;

    auto* cf = app.add_subcommand("converge-full", "manufactured-solution convergence study, full model");
    cf->add_option("--levels", levels, "number of grids")->capture_default_str();
    cf->add_option("--base", base, "cells in x on the coarsest grid (ny = 2 nx)")->capture_default_str();
    add_common(cf, common);

    auto* cr = app.add_subcommand("converge-reduced", "manufactured-solution convergence study, reduced model");
    cr->add_option("--levels", levels, "number of grids")->capture_default_str();
    cr->add_option("--base", base, "cells per direction on the coarsest grid")->capture_default_str();
    cr->add_option("--profile", profile, "linear, piecewise-linear or quadratic")->capture_default_str();
    cr->add_flag("--closure-defect", closure_defect, "move the closure defect of the exact solution into the data");
    add_common(cr, common);

    auto* fl = app.add_subcommand("filtration", "filtration benchmark, full against reduced");
    fl->set_help_flag("--help", "print this help message and exit");
    fl->add_option("--h", h_inv, "inverse mesh width, h = 1/H")->capture_default_str();
    fl->add_option("--profile", profile, "linear, piecewise-linear, quadratic or all")->capture_default_str();
    fl->add_option("--repeats", repeats, "timing repeats (minimum is reported)")->capture_default_str();
    add_common(fl, common);

    auto* rn = app.add_subcommand("run", "run a configuration file");
    rn->add_option("--config", config_path, "configuration file")->required();
    rn->add_option("--out", common.out, "output directory (overrides the file and $SBD_OUTPUT_DIR)");

    auto* dm = app.add_subcommand("dump-matrix", "write the assembled system in MatrixMarket format");
    dm->add_option("--scenario", scenario, "mms-full, mms-reduced or filtration")->capture_default_str();
    dm->add_option("--nx", nx, "cells in x (filtration: inverse mesh width)")->capture_default_str();
    dm->add_option("--model", model, "filtration model: full or reduced")->capture_default_str();
    dm->add_option("--profile", profile, "closure profile of the reduced model")->capture_default_str();
    dm->add_option("--file", matrix_file, "output file")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (cf->parsed() || cr->parsed()) {
            const Model m = cf->parsed() ? Model::Full : Model::Reduced;
            if (levels < 3) throw ValidationError("--levels must be at least 3");
            RunConfig c;
            c.scenario = m == Model::Full ? Scenario::MmsFull : Scenario::MmsReduced;
            c.model = m;
            c.geometry = mms_geometry(m, base);
            c.params = mms_params();
            c.profile = profiles_from(profile).front();
            c.closure_defect = closure_defect;
            c.method = parse_solve_method(common.method);
            c.tol = common.tol;
            for (int k = 0; k < levels; ++k) c.levels.push_back(base << k);
            execute_config(c, resolve_out(common), std::cout);
        } else if (fl->parsed()) {
            FiltrationConfig f;
            f.h = 1.0 / h_inv;
            f.solver.method = parse_solve_method(common.method);
            f.solver.tol = common.tol;
            f.timing_repeats = repeats;
            const auto out = resolve_out(common);
            std::filesystem::create_directories(out);
            const FiltrationReport rep = run_filtration(f, profiles_from(profile));
            const std::string sfx = "_h" + std::to_string(h_inv);
            std::ofstream dv(out / ("deviations" + sfx + ".csv")), pr(out / ("profile" + sfx + ".csv"));
            write_deviations_csv(rep, dv);
            write_profile_csv(rep, pr);
            if (!dv || !pr) throw std::runtime_error("cannot write into '" + out.string() + "'");
            std::cout << "full model: " << rep.full.unknowns << " unknowns, cpu " << std::setprecision(4)
                      << rep.full.cpu_total() << " s, mass imbalance "
                      << filtration_mass_imbalance(rep.full.solution) << '\n';
            for (const ProfileRun& r : rep.runs)
                std::cout << std::left << std::setw(17) << to_string(r.profile.kind) << std::right
                          << " eps_u " << r.deviations.eps_u << "  eps_v " << r.deviations.eps_v << "  eps_p "
                          << r.deviations.eps_p << "  cpu " << r.reduced.cpu_total() << " s, mass imbalance "
                          << filtration_mass_imbalance(r.reduced.solution) << '\n';
        } else if (rn->parsed()) {
            const RunConfig c = parse_config_file(config_path);
            execute_config(c, resolve_out(common, c.output), std::cout);
        } else if (dm->parsed()) {
            LinearSystem sys(0);
            const Scenario sc = parse_scenario(scenario);
            if (sc == Scenario::Filtration) {
                FiltrationConfig f;
                f.h = 1.0 / nx;
                const Model m = model == "reduced" ? Model::Reduced : Model::Full;
                if (model != "full" && model != "reduced") throw ValidationError("unknown model '" + model + "'");
                const StaggeredGrid g = build_grid(filtration_geometry(f, m), m);
                const FiltrationBCs b = filtration_bcs();
                sys = m == Model::Full ? assemble_full(g, f.params, {}, b.full)
                                       : assemble_reduced(g, f.params, profiles_from(profile).front(), {}, b.reduced,
                                                          b.gamma);
            } else if (sc == Scenario::MmsFull || sc == Scenario::MmsReduced) {
                const Model m = sc == Scenario::MmsFull ? Model::Full : Model::Reduced;
                MmsOptions opt;
                opt.profile = profiles_from(profile).front();
                sys = build_mms_problem(m, mms_geometry(m, nx), mms_params(), opt).system;
            } else {
                throw ValidationError("dump-matrix supports mms-full, mms-reduced and filtration");
            }
            std::ofstream os(matrix_file);
            if (!os) throw std::runtime_error("cannot write '" + matrix_file + "'");
            sys.write_matrix_market(os);
            std::cout << sys.size() << " unknowns, " << sys.matrix().nonZeros() << " nonzeros -> " << matrix_file
                      << '\n';
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << " (best relative residual " << e.best_residual() << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace sbd
