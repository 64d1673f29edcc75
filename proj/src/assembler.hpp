#pragma once

// Shared MAC stencils for the full and the reduced assembly.

#include <optional>
#include <vector>

#include "sbd/assembly.hpp"

namespace sbd::detail {

class Assembler {
public:
    struct ReducedInput {
        ClosureProfile profile;
        const SourceFieldsReduced* sources;
        GammaBoundarySpec gamma_bcs;
    };

    Assembler(const StaggeredGrid& grid, const PhysicalParams& params, const BoundarySpec& bcs,
              VectorField f_ff, VectorField f_tr, ScalarField q, std::optional<ReducedInput> reduced);

    LinearSystem run();

private:
    using LF = LinearForm;

    // unknowns
    LF U(int i, int j) const { return LF::unknown(dof_.u(i, j)); }
    LF V(int i, int j) const { return LF::unknown(dof_.v(i, j)); }
    LF P(int i, int j) const { return LF::unknown(dof_.p(i, j)); }
    LF Vn(int i) const { return LF::unknown(dof_.gamma_vn(i)); }
    LF Vt(int i) const { return LF::unknown(dof_.gamma_vt(i)); }
    LF Pg(int i) const { return LF::unknown(dof_.gamma_p(i)); }

    double mu_of_row(int j) const;
    bool transition_row(int j) const { return g_.region_of_row(j) == Region::Transition; }
    const StokesBC& left_bc(int row) const;
    const StokesBC& right_bc(int row) const;

    // one-sided normal derivatives through a boundary value g at distance 0,
    // with cell values a (h/2) and b (3h/2) inside
    static LF d_inward(const LF& g, const LF& a, const LF& b, double h) {
        return (-8.0 / 3.0 * g + 3.0 * a - b * (1.0 / 3.0)) / h;
    }

    // interface traces
    void build_traces();
    LF vbar_on_row(int i, int jf) const;   // v at (x_i, face row jf) for a u-face column
    LF ubar_gamma(int i) const;            // u trace at the cell centre x_i on the bottom Stokes face row
    LF u_flux_y(int i, int jf, bool from_above) const;
    LF dpdx_cell(int i, int j) const;
    LF dpdy_cell(int i, int j) const;
    LF dpdx_pm_top(int i) const;

    // rows
    void u_row(int i, int j);
    void v_row(int i, int jf);
    void v_gamma_pm_row(int i);
    void stokes_mass_row(int i, int j);
    void darcy_row(int i, int j);
    void gamma_rows(int i);

    LF gx_flux(int i, int jf, int row) const;  // mu dv/dx on the east face of v(i, jf), rows' viscosity
    LF gy_flux(int i, int j) const;            // mu dv/dy - p at cell (i, j)
    LF darcy_flux_boundary(const DarcyBC& bc, int i, int j, int side) const;

    // reduced model
    LF vt_face(int k) const;
    LF vn_slope(int k) const;
    LF tangential_flux(int k) const;
    double extra(const LineField& f, double s) const { return f ? f(s) : 0.0; }

    const StaggeredGrid& g_;
    const PhysicalParams& p_;
    const BoundarySpec& bc_;
    VectorField f_ff_, f_tr_;
    ScalarField q_;
    std::optional<ReducedInput> red_;
    DofMap dof_;
    LinearSystem sys_;

    double hx_, hy_;
    SymTensor2 Kinv_tr_;
    double friction_ = 0.0;  // mu / sqrt(K_tr)
    std::optional<ReducedCoefficients> rc_;

    std::vector<LF> u_gamma_;  // u trace on the bottom Stokes face row, per u column
    std::vector<LF> u_ffi_;    // full model: u trace on gamma_ff per u column
    std::vector<LF> p_trace_;  // porous pressure trace on the top Darcy face, per cell column
    std::vector<LF> v_pm_;     // reduced model: porous-side normal velocity per cell column
};

}  // namespace sbd::detail
