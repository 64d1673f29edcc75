#pragma once

/**
 * @file verification.hpp
 * @brief Manufactured solutions, discrete error norms and convergence studies.
 */

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sbd/assembly.hpp"
#include "sbd/solution.hpp"
#include "sbd/solver.hpp"

namespace sbd {

/// Closed-form manufactured solution
///   u = cos(x) e^{y - y0},  v = sin(x) e^{y - y0},  p = sin(x + y - y0)
/// in the free flow and the transition zone, p_pm = -100 (y - y0) sin(x)
/// in the porous medium, with y0 the bottom of the transition zone.
class MmsExact {
public:
    explicit MmsExact(double y_gamma_pm) : y0_(y_gamma_pm) {}

    double y0() const { return y0_; }

    double u(double x, double y) const;
    double v(double x, double y) const;
    double p(double x, double y) const;
    double p_pm(double x, double y) const;

    double u_x(double x, double y) const;
    double u_y(double x, double y) const;
    double v_x(double x, double y) const;
    double v_y(double x, double y) const;
    double p_x(double x, double y) const;
    double p_y(double x, double y) const;
    double p_pm_x(double x, double y) const;
    double p_pm_y(double x, double y) const;

    /// Averages across the strip [y0, y0 + d] and their tangential derivatives.
    double U(double s, double d) const;
    double V(double s, double d) const;
    double P(double s, double d) const;
    double U_s(double s, double d) const;
    double U_ss(double s, double d) const;
    double V_s(double s, double d) const;
    double V_ss(double s, double d) const;
    double P_s(double s, double d) const;

private:
    double y0_;
};

SourceFieldsFull mms_sources_full(const PhysicalParams& params, double y_gamma_pm);

/// Averaged sources for the reduced model. With `closure_defect` the
/// interface data absorb the mismatch between the averaged exact fields and
/// the closure assumptions, so the exact fields solve the reduced equations.
SourceFieldsReduced mms_sources_reduced(const PhysicalParams& params, const ClosureProfile& profile,
                                        double y_gamma_pm, double d, bool closure_defect = false);

/// Velocity data on every Stokes/Brinkman side, pressure data on every Darcy side.
BoundarySpec mms_bcs_full(const PhysicalParams& params, double y_gamma_pm, double Lx, double Ly);
/// Traction on the free-flow left/right sides, velocity on top, pressure in the porous medium.
BoundarySpec mms_bcs_reduced(const PhysicalParams& params, double y_gamma_pm, double Lx, double Ly);
/// Neumann data at both ends of the interface line.
GammaBoundarySpec mms_gamma_bcs(const PhysicalParams& params, double y_gamma_pm, double d, double Lx);

/// The reference geometries of the two manufactured-solution tests.
GeometryConfig mms_geometry(Model model, int nx);
PhysicalParams mms_params();
constexpr double kMmsReducedThickness = 5e-4;

struct MmsOptions {
    ClosureProfile profile = ClosureProfile::quadratic();
    bool closure_defect = false;
    SolverOptions solver{};
};

struct MmsProblem {
    StaggeredGrid grid;
    LinearSystem system;
    MmsExact exact;
};

MmsProblem build_mms_problem(Model model, const GeometryConfig& geometry, const PhysicalParams& params,
                             const MmsOptions& options = {});

/// Exact values at every unknown location (averages on the interface line).
Vector sample_exact(const StaggeredGrid& grid, const MmsExact& exact);

enum class FieldId { UFF, VFF, PFF, UTR, VTR, PTR, PPM, U, V, P };
std::string to_string(FieldId f);
std::vector<FieldId> fields_for(Model model);

/// sqrt(sum w (exact - numeric)^2). Throws ValidationError on length mismatch.
double l2_error(const std::vector<double>& numeric, const std::vector<double>& exact, double weight);

struct FieldSample {
    std::vector<double> numeric;
    std::vector<double> exact;
    double weight = 0.0;  ///< hx*hy in the bulk, hx on the interface line
};

/// Values of one field at its staggered locations. Throws ValidationError
/// when the field does not exist on the grid (e.g. u_tr on a reduced grid).
FieldSample sample_field(const Solution& solution, FieldId field, const MmsExact& exact);

struct LevelResult {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    std::size_t unknowns = 0;
    std::map<FieldId, double> errors;
    double relative_residual = 0.0;
    double cpu_seconds = 0.0;
};

struct OrderTable {
    std::vector<double> pairwise;  ///< log2(e_k / e_{k+1})
    double slope = 0.0;            ///< least-squares slope of log e against log h
    bool undefined = false;        ///< some error was zero or not finite
};

OrderTable observed_orders(const std::vector<double>& h, const std::vector<double>& errors);

struct ConvergenceReport {
    Model model = Model::Full;
    std::vector<LevelResult> levels;
    std::map<FieldId, OrderTable> orders;
};

/// Runs the manufactured-solution test on each grid. Requires at least three
/// grids, each refining the previous one by two in both directions.
ConvergenceReport convergence_study(Model model, const std::vector<GeometryConfig>& grids,
                                    const PhysicalParams& params, const MmsOptions& options = {});

/// CSV with columns h, field, error, order (order empty on the coarsest level).
void write_convergence_csv(const ConvergenceReport& report, std::ostream& os);

/// Weighted l1 norm of the residual A x_exact - b (cell area for bulk rows,
/// hx for interface rows).
double consistency_residual(const StaggeredGrid& grid, const LinearSystem& system, const Vector& x_exact);

struct ConsistencyReport {
    std::vector<double> h;
    std::vector<double> residual;
    OrderTable orders;
};

ConsistencyReport consistency_study(Model model, const std::vector<GeometryConfig>& grids,
                                    const PhysicalParams& params, const MmsOptions& options = {});

}  // namespace sbd
