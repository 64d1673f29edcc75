#include "sbd/assembly.hpp"

#include <cmath>

#include "assembler.hpp"

namespace sbd {

TangentialClosure tangential_closure(const PhysicalParams& params, double d, double V_tau, double u_ff) {
    const double sk = std::sqrt(params.K_pm_ref());
    const double ad = params.alpha * d;
    const double den = ad + 4.0 * sk;
    return {2.0 * sk * (3.0 * V_tau - u_ff) / den,
            (-6.0 * (ad + 2.0 * sk) * V_tau + 4.0 * (ad + 3.0 * sk) * u_ff) / (d * den)};
}

NormalClosure normal_closure(const ClosureProfile& profile, double d, double V_n, double v_ff_n, double v_pm_n) {
    const auto [l1, l2] = closure_params(profile);
    return {(-(l1 + l2) * V_n + l1 * v_ff_n + l2 * v_pm_n) / d, ((l1 + l2) * V_n - l2 * v_ff_n - l1 * v_pm_n) / d};
}

ReducedCoefficients reduced_coefficients(const PhysicalParams& p, const ClosureProfile& profile, double d) {
    if (!(d > 0.0)) throw ValidationError("d must be positive");
    const auto [l1, l2] = closure_params(profile);
    const double mue = p.mu_eff;
    const double sk = std::sqrt(p.K_pm_ref());
    const double ad = p.alpha * d;
    const double den = d * (ad + 4.0 * sk);
    const double Mnn = m_projection(p.K_tr, {0.0, 1.0}, {0.0, 1.0});
    const double Mnt = m_projection(p.K_tr, {0.0, 1.0}, {1.0, 0.0});
    const double Mtt = m_projection(p.K_tr, {1.0, 0.0}, {1.0, 0.0});

    ReducedCoefficients c{};
    c.friction = p.mu / std::sqrt(p.K_tr_ref());
    c.normal_vff = mue * (l1 * l1 - l2 * l2) / (l1 * d);
    c.normal_vn = c.normal_vff + d * p.mu * Mnn;
    c.normal_vt = d * p.mu * Mnt;
    c.normal_p = (l1 + l2) / l1;
    c.tangential_uff = mue * (6.0 * ad + 12.0 * sk) / den;
    c.tangential_vt = mue * (12.0 * ad + 12.0 * sk) / den + d * p.mu * Mtt;
    c.tangential_vn = d * p.mu * Mnt;
    c.traction_n_vn = -mue * (l1 + l2) / d;
    c.traction_n_vff = mue * l1 / d;
    c.traction_n_vpm = mue * l2 / d;
    c.traction_t_vt = -c.tangential_uff;
    c.traction_t_uff = mue * (4.0 * ad + 12.0 * sk) / den;
    c.vpm_vn = (l1 + l2) / l1;
    c.vpm_vff = -l2 / l1;
    c.vpm_dp = d / (mue * l1);
    return c;
}

LinearSystem assemble_reduced(const StaggeredGrid& grid, const PhysicalParams& params, const ClosureProfile& profile,
                              const SourceFieldsReduced& sources, const BoundarySpec& bcs,
                              const GammaBoundarySpec& gamma_bcs) {
    if (!grid.reduced()) throw ValidationError("assemble_reduced: grid was not built for the reduced model");
    closure_params(profile);
    detail::Assembler::ReducedInput in{profile, &sources, gamma_bcs};
    detail::Assembler a(grid, params, bcs, sources.f_ff, VectorField{}, sources.q, in);
    return a.run();
}

}  // namespace sbd
