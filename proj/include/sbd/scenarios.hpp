#pragma once

/**
 * @file scenarios.hpp
 * @brief The filtration benchmark: fluid enters through the bottom of the
 * porous medium, crosses the transition zone and leaves the free flow
 * through its right side.
 */

#include <iosfwd>
#include <string>
#include <vector>

#include "sbd/assembly.hpp"
#include "sbd/solution.hpp"
#include "sbd/solver.hpp"

namespace sbd {

/// mu = mu_eff = 1e-3, alpha = 1, beta = 0, K_tr = 1e-3 I, K_pm = 1e-8 I.
PhysicalParams filtration_params();

struct FiltrationConfig {
    double h = 1.0 / 200.0;
    double Lx = 1.0;
    double Ly = 1.005;
    double y_gamma_pm = 0.5;
    double y_gamma_ff = 0.505;
    PhysicalParams params = filtration_params();
    SolverOptions solver{};
    /// Each model is assembled and solved this many times; the minimum CPU
    /// time is reported.
    int timing_repeats = 1;
};

/// Throws ValidationError when h does not resolve the layer boundaries.
GeometryConfig filtration_geometry(const FiltrationConfig& config, Model model);

/// Inflow speed through the bottom of the porous medium (positive into the domain).
double filtration_inflow(double x);

struct FiltrationBCs {
    BoundarySpec full;
    BoundarySpec reduced;
    GammaBoundarySpec gamma;
};

/// No-slip walls, parabolic inflow on [0.25, 0.75] x {0}, do-nothing on the
/// right side of the free flow, impermeable porous walls, V = 0 at both
/// ends of the interface line.
FiltrationBCs filtration_bcs();

/// Averages of u, v, p over the transition zone, one value per cell column.
struct GammaAverages {
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> p;
};

/// Midpoint rule for u and p (cell-centred in y), trapezoid rule for v
/// (face rows at both layer boundaries). u is averaged from face columns to
/// cell centres afterwards. Requires a full-model solution.
GammaAverages average_full_across_transition(const Solution& full);

struct Deviations {
    double eps_u = 0.0;
    double eps_v = 0.0;
    double eps_p = 0.0;
};

/// ||a - b|| / ||a|| per field; NaN when ||a|| < 1e-14. Throws
/// ValidationError when the lengths differ.
Deviations relative_deviations(const GammaAverages& full, const GammaAverages& reduced);
GammaAverages gamma_unknowns(const Solution& reduced);

/// u and v along a horizontal grid line, at cell-centre abscissae.
struct LineProfile {
    double y = 0.0;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> v;
};

/// Throws ValidationError when y is not a horizontal face row of the
/// Stokes/Brinkman region.
LineProfile extract_profile(const Solution& solution, double y);

/// |outflow - inflow| / inflow for the filtration boundary data.
double filtration_mass_imbalance(const Solution& solution);

struct ModelRun {
    Solution solution;
    std::size_t unknowns = 0;
    double relative_residual = 0.0;
    double cpu_assembly = 0.0;
    double cpu_solve = 0.0;
    std::string method;  ///< solver actually used

    double cpu_total() const { return cpu_assembly + cpu_solve; }
};

ModelRun run_filtration_full(const FiltrationConfig& config);
ModelRun run_filtration_reduced(const FiltrationConfig& config, const ClosureProfile& profile);

struct ProfileRun {
    ClosureProfile profile;
    ModelRun reduced;
    Deviations deviations;
};

struct FiltrationReport {
    double h = 0.0;
    ModelRun full;
    GammaAverages averages;
    std::vector<ProfileRun> runs;
};

FiltrationReport run_filtration(const FiltrationConfig& config, const std::vector<ClosureProfile>& profiles);

/// Columns: profile, eps_u, eps_v, eps_p, cpu_full_s, cpu_reduced_s.
void write_deviations_csv(const FiltrationReport& report, std::ostream& os);

/// Columns: x1, u_full, v_full, u_reduced_interp, v_reduced_interp, U_gamma, V_gamma.
/// The reduced columns come from the run with the quadratic profile, or the
/// first run when there is none.
void write_profile_csv(const FiltrationReport& report, std::ostream& os);

}  // namespace sbd
