#pragma once

/**
 * @file assembly.hpp
 * @brief Monolithic MAC assembly of the full and the reduced models.
 *
 * Every equation is written as a row "form == 0" with rows scaled per unit
 * cell area (bulk) or per unit length (interface line). Rows belong to the
 * unknown they are centred on: momentum rows to velocity faces, mass and
 * Darcy rows to pressure cells, interface rows to (V_n, V_tau, P).
 */

#include "sbd/core.hpp"
#include "sbd/grid.hpp"
#include "sbd/linear_system.hpp"
#include "sbd/problem.hpp"

namespace sbd {

/// Full model, or one of the single-region box layouts.
LinearSystem assemble_full(const StaggeredGrid& grid, const PhysicalParams& params, const SourceFieldsFull& sources,
                           const BoundarySpec& bcs);

LinearSystem assemble_reduced(const StaggeredGrid& grid, const PhysicalParams& params, const ClosureProfile& profile,
                              const SourceFieldsReduced& sources, const BoundarySpec& bcs,
                              const GammaBoundarySpec& gamma_bcs);

struct TangentialClosure {
    double v_tau_at_pm;   ///< tangential velocity on the porous side of the strip
    double dv_dn_tau_at_ff;  ///< tangential component of dv/dn on the free-flow side
};

/// Quadratic tangential profile through the free-flow trace, with mean
/// V_tau and slip condition at the porous side.
TangentialClosure tangential_closure(const PhysicalParams& params, double d, double V_tau, double u_ff);

struct NormalClosure {
    double dv_dn_at_ff;
    double dv_dn_at_pm;
};

NormalClosure normal_closure(const ClosureProfile& profile, double d, double V_n, double v_ff_n, double v_pm_n);

/// Coefficients of the reduced interface rows; a pure function of the
/// parameters, the profile and the thickness.
struct ReducedCoefficients {
    double friction;         ///< mu / sqrt(K_tr)
    // normal momentum row
    double normal_vn;        ///< mu_eff (l1^2 - l2^2) / (l1 d) + d mu M_nn
    double normal_vt;        ///< d mu M_ntau
    double normal_p;         ///< (l1 + l2) / l1, also the p_pm coefficient
    double normal_vff;       ///< mu_eff (l1^2 - l2^2) / (l1 d)
    // tangential momentum row
    double tangential_vt;    ///< mu_eff (12 a d + 12 sqrt K) / (d (a d + 4 sqrt K)) + d mu M_tautau
    double tangential_vn;    ///< d mu M_taun
    double tangential_uff;   ///< mu_eff (6 a d + 12 sqrt K) / (d (a d + 4 sqrt K))
    // free-flow traction transmission conditions
    double traction_n_vn;    ///< -mu_eff (l1 + l2) / d
    double traction_n_vff;   ///< mu_eff l1 / d
    double traction_n_vpm;   ///< mu_eff l2 / d
    double traction_t_vt;    ///< -mu_eff (6 a d + 12 sqrt K) / (d (a d + 4 sqrt K))
    double traction_t_uff;   ///< mu_eff (4 a d + 12 sqrt K) / (d (a d + 4 sqrt K))
    // porous-side normal velocity: v_pm = vpm_vn V_n + vpm_vff v_ff + vpm_dp (p_pm - P)
    double vpm_vn;
    double vpm_vff;
    double vpm_dp;
};

ReducedCoefficients reduced_coefficients(const PhysicalParams& params, const ClosureProfile& profile, double d);

}  // namespace sbd
