#include "assembler.hpp"

#include <cmath>
#include <stdexcept>

namespace sbd::detail {

namespace {
enum Side { East, West, North, South };
}

Assembler::Assembler(const StaggeredGrid& grid, const PhysicalParams& params, const BoundarySpec& bcs,
                     VectorField f_ff, VectorField f_tr, ScalarField q, std::optional<ReducedInput> reduced)
    : g_(grid), p_(params), bc_(bcs), f_ff_(std::move(f_ff)), f_tr_(std::move(f_tr)), q_(std::move(q)),
      red_(std::move(reduced)), dof_(grid), sys_(dof_.size()), hx_(grid.hx()), hy_(grid.hy()) {
    validate_params(p_);
    Kinv_tr_ = p_.K_tr.inverse();
    friction_ = p_.mu / std::sqrt(p_.K_tr_ref());
    if (red_) rc_ = reduced_coefficients(p_, red_->profile, g_.thickness());
}

double Assembler::mu_of_row(int j) const { return transition_row(j) ? p_.mu_eff : p_.mu; }

const StokesBC& Assembler::left_bc(int row) const { return transition_row(row) ? bc_.tr_left : bc_.ff_left; }
const StokesBC& Assembler::right_bc(int row) const { return transition_row(row) ? bc_.tr_right : bc_.ff_right; }

LinearForm Assembler::vbar_on_row(int i, int jf) const {
    if (i == 0) return V(0, jf);
    if (i == g_.nx()) return V(g_.nx() - 1, jf);
    return 0.5 * (V(i - 1, jf) + V(i, jf));
}

namespace {
// Cubic interpolation on four equispaced values: midpoint of the inner pair,
// and the point halfway between the first two.
LinearForm cubic_mid(const LinearForm& a, const LinearForm& b, const LinearForm& c, const LinearForm& d) {
    return (9.0 * (b + c) - (a + d)) * (1.0 / 16.0);
}
LinearForm cubic_edge(const LinearForm& a, const LinearForm& b, const LinearForm& c, const LinearForm& d) {
    return (5.0 * a + 15.0 * b - 5.0 * c + d) * (1.0 / 16.0);
}
}  // namespace

LinearForm Assembler::ubar_gamma(int i) const {
    const int nx = g_.nx();
    const auto& t = u_gamma_;
    if (!g_.reduced() || nx < 3) return 0.5 * (t[i] + t[i + 1]);
    if (i == 0) return cubic_edge(t[0], t[1], t[2], t[3]);
    if (i == nx - 1) return cubic_edge(t[nx], t[nx - 1], t[nx - 2], t[nx - 3]);
    return cubic_mid(t[i - 1], t[i], t[i + 1], t[i + 2]);
}

void Assembler::build_traces() {
    const int nx = g_.nx();
    const int sb = g_.stokes_begin();
    const double h = hy_;
    const double mu = p_.mu, mue = p_.mu_eff;
    const SymTensor2& beta = p_.beta;

    if (g_.layout() == Layout::Full) {
        const int m = g_.tr_rows();
        const int jf = g_.ff_begin();
        const double s = std::sqrt(p_.K_pm_ref()) / p_.alpha;
        u_gamma_.resize(nx + 1);
        u_ffi_.resize(nx + 1);
        for (int k = 0; k <= nx; ++k) {
            const LF vbar = vbar_on_row(k, jf);
            const LF ff_side = mu * (3.0 * U(k, jf) - U(k, jf + 1) * (1.0 / 3.0)) / h - friction_ * beta.xy * vbar;
            const double ff_den = 8.0 * mu / (3.0 * h) + friction_ * beta.xx;
            if (m >= 2) {
                // slip condition u = s du/dy on the bottom of the transition zone
                u_gamma_[k] = s * (3.0 * U(k, sb) - U(k, sb + 1) * (1.0 / 3.0)) / (h + 8.0 * s / 3.0);
                // tangential stress jump with continuous velocity on gamma_ff
                const LF num = ff_side + mue * (3.0 * U(k, jf - 1) - U(k, jf - 2) * (1.0 / 3.0)) / h;
                u_ffi_[k] = num / (ff_den + 8.0 * mue / (3.0 * h));
            } else {
                // One transition row: a parabola through both traces and the
                // cell value closes the two conditions together.
                const double kappa = s / (h + 3.0 * s);
                const LF num = ff_side + U(k, sb) * (4.0 * mue * (1.0 - kappa) / h);
                u_ffi_[k] = num / (ff_den + (3.0 - kappa) * mue / h);
                u_gamma_[k] = kappa * (4.0 * U(k, sb) - u_ffi_[k]);
            }
        }
    }

    if (g_.reduced()) {
        const ReducedCoefficients& rc = *rc_;
        const InterfaceData& ex = red_->sources->extra;
        const int top = g_.pm_rows() - 1;
        const SymTensor2& K = p_.K_pm;
        u_gamma_.resize(nx + 1);
        for (int k = 0; k <= nx; ++k) {
            const double x = g_.face_x(k);
            LF num = mu * (3.0 * U(k, sb) - U(k, sb + 1) * (1.0 / 3.0)) / h - rc.traction_t_vt * vt_face(k) -
                     friction_ * beta.xy * vbar_on_row(k, sb) - extra(ex.traction_t, x);
            const double den = 8.0 * mu / (3.0 * h) + rc.traction_t_uff + friction_ * beta.xx;
            u_gamma_[k] = num / den;
        }
        p_trace_.resize(nx);
        v_pm_.resize(nx);
        for (int i = 0; i < nx; ++i) {
            const double x = g_.cell_x(i);
            const LF A = rc.vpm_vn * Vn(i) + rc.vpm_vff * V(i, sb) - rc.vpm_dp * (Pg(i) + extra(ex.pressure, x));
            const double c = rc.vpm_dp;
            LF rhs = (K.yy / mu) * (3.0 * P(i, top) - P(i, top - 1) * (1.0 / 3.0)) / h - A;
            if (K.xy != 0.0) rhs -= (K.xy / mu) * dpdx_pm_top(i);
            p_trace_[i] = rhs / (c + 8.0 * K.yy / (3.0 * mu * h));
            v_pm_[i] = A + c * p_trace_[i];
        }
    }
}

LinearForm Assembler::u_flux_y(int i, int jf, bool from_above) const {
    const int sb = g_.stokes_begin();
    const int ny = g_.ny();
    const double x = g_.face_x(i);
    const double h = hy_;
    if (jf == ny) {
        const StokesBC& bc = bc_.ff_top;
        const Vec2 d = bc.data(x, g_.stokes_face_y(ny));
        if (bc.kind == StokesBC::Kind::Traction) return LF(d[0]);
        return -mu_of_row(ny - 1) * d_inward(LF(d[0]), U(i, ny - 1), U(i, ny - 2), h);
    }
    if (jf == sb) {
        switch (g_.layout()) {
        case Layout::StokesBox: {
            const StokesBC& bc = bc_.stokes_bottom;
            const Vec2 d = bc.data(x, 0.0);
            if (bc.kind == StokesBC::Kind::Traction) return LF(-d[0]);
            return p_.mu * d_inward(LF(d[0]), U(i, sb), U(i, sb + 1), h);
        }
        case Layout::Full:
            if (g_.tr_rows() >= 2) return p_.mu_eff * d_inward(u_gamma_[i], U(i, sb), U(i, sb + 1), h);
            return (p_.mu_eff / h) * (4.0 * U(i, sb) - 3.0 * u_gamma_[i] - u_ffi_[i]);
        case Layout::Reduced: return p_.mu * d_inward(u_gamma_[i], U(i, sb), U(i, sb + 1), h);
        case Layout::DarcyBox: break;
        }
        throw std::logic_error("u_flux_y: no Stokes region");
    }
    if (g_.layout() == Layout::Full && jf == g_.ff_begin()) {
        if (from_above) return p_.mu * d_inward(u_ffi_[i], U(i, jf), U(i, jf + 1), h);
        if (g_.tr_rows() >= 2) return -p_.mu_eff * d_inward(u_ffi_[i], U(i, jf - 1), U(i, jf - 2), h);
        return (p_.mu_eff / h) * (u_gamma_[i] - 4.0 * U(i, jf - 1) + 3.0 * u_ffi_[i]);
    }
    return mu_of_row(jf) * (U(i, jf) - U(i, jf - 1)) / h;
}

LinearForm Assembler::dpdx_cell(int i, int j) const {
    const int nx = g_.nx();
    if (i == 0) return (P(1, j) - P(0, j)) / hx_;
    if (i == nx - 1) return (P(i, j) - P(i - 1, j)) / hx_;
    return (P(i + 1, j) - P(i - 1, j)) / (2.0 * hx_);
}

LinearForm Assembler::dpdy_cell(int i, int j) const {
    const int top = g_.pm_rows() - 1;
    if (j == 0) return (P(i, 1) - P(i, 0)) / hy_;
    if (j == top) return (P(i, j) - P(i, j - 1)) / hy_;
    return (P(i, j + 1) - P(i, j - 1)) / (2.0 * hy_);
}

LinearForm Assembler::dpdx_pm_top(int i) const {
    const int top = g_.pm_rows() - 1;
    return 1.5 * dpdx_cell(i, top) - 0.5 * dpdx_cell(i, top - 1);
}

LinearForm Assembler::gx_flux(int k, int jf, int row) const {
    const int nx = g_.nx();
    const double mu = mu_of_row(row);
    const double y = g_.stokes_face_y(jf);
    if (k == -1) {
        const StokesBC& bc = left_bc(row);
        const Vec2 d = bc.data(0.0, y);
        if (bc.kind == StokesBC::Kind::Traction) return LF(-d[1]);
        return mu * d_inward(LF(d[1]), V(0, jf), V(1, jf), hx_);
    }
    if (k == nx - 1) {
        const StokesBC& bc = right_bc(row);
        const Vec2 d = bc.data(g_.geometry().Lx, y);
        if (bc.kind == StokesBC::Kind::Traction) return LF(d[1]);
        return -mu * d_inward(LF(d[1]), V(nx - 1, jf), V(nx - 2, jf), hx_);
    }
    return mu * (V(k + 1, jf) - V(k, jf)) / hx_;
}

LinearForm Assembler::gy_flux(int i, int j) const {
    return mu_of_row(j) * (V(i, j + 1) - V(i, j)) / hy_ - P(i, j);
}

void Assembler::u_row(int i, int j) {
    const int nx = g_.nx();
    const double x = g_.face_x(i);
    const double y = g_.cell_y(j);
    const bool left = i == 0, right = i == nx;
    const StokesBC* side = left ? &left_bc(j) : (right ? &right_bc(j) : nullptr);
    if (side && side->kind == StokesBC::Kind::Velocity) {
        sys_.set_row(dof_.u(i, j), U(i, j) - side->data(x, y)[0]);
        return;
    }
    const double mu = mu_of_row(j);
    const double W = side ? 0.5 * hx_ : hx_;
    const LF fe = right ? LF(side->data(x, y)[0]) : mu * (U(i + 1, j) - U(i, j)) / hx_ - P(i, j);
    const LF fw = left ? LF(-side->data(x, y)[0]) : mu * (U(i, j) - U(i - 1, j)) / hx_ - P(i - 1, j);
    const LF fn = u_flux_y(i, j + 1, false);
    const LF fs = u_flux_y(i, j, true);
    LF row = -(fe - fw) / W - (fn - fs) / hy_;
    if (transition_row(j)) {
        row += (p_.mu * Kinv_tr_.xx) * U(i, j);
        if (Kinv_tr_.xy != 0.0)
            row += (p_.mu * Kinv_tr_.xy * 0.5) * (vbar_on_row(i, j) + vbar_on_row(i, j + 1));
        row -= f_tr_(x, y)[0];
    } else {
        row -= f_ff_(x, y)[0];
    }
    sys_.set_row(dof_.u(i, j), row);
}

void Assembler::v_gamma_pm_row(int i) {
    // Darcy velocity through gamma_pm; the porous pressure trace follows
    // from the normal force balance.
    const int jp = g_.stokes_begin();
    const double h = hy_;
    const LF dvdy = (-3.0 * V(i, jp) + 4.0 * V(i, jp + 1) - V(i, jp + 2)) / (2.0 * h);
    const LF ptr = g_.tr_rows() >= 2 ? 1.5 * P(i, jp) - 0.5 * P(i, jp + 1) : P(i, jp);
    const LF pI = ptr - p_.mu_eff * dvdy;
    const LF dpdy = -d_inward(pI, P(i, jp - 1), P(i, jp - 2), h);
    LF row = V(i, jp) + (p_.K_pm.yy / p_.mu) * dpdy;
    if (p_.K_pm.xy != 0.0) row += (p_.K_pm.xy / p_.mu) * dpdx_pm_top(i);
    sys_.set_row(dof_.v(i, jp), row);
}

void Assembler::v_row(int i, int jf) {
    const int sb = g_.stokes_begin();
    const int ny = g_.ny();
    const double x = g_.cell_x(i);
    const double y = g_.stokes_face_y(jf);
    const Layout layout = g_.layout();

    if (jf == sb && layout == Layout::Full) {
        v_gamma_pm_row(i);
        return;
    }

    if (layout == Layout::Full && jf == g_.ff_begin()) {
        // control volume straddling gamma_ff, closed by the stress jump
        const int rf = jf, rt = jf - 1;
        const LF ug = 0.5 * (u_ffi_[i] + u_ffi_[i + 1]);
        const LF gy = gy_flux(i, rf) - gy_flux(i, rt);
        const LF gx = (gx_flux(i, jf, rf) - gx_flux(i - 1, jf, rf)) + (gx_flux(i, jf, rt) - gx_flux(i - 1, jf, rt));
        LF row = -gy / hy_ - gx / (2.0 * hx_);
        row += (friction_ / hy_) * (p_.beta.xy * ug + p_.beta.yy * V(i, jf));
        row += (0.5 * p_.mu * Kinv_tr_.yy) * V(i, jf);
        if (Kinv_tr_.xy != 0.0) row += (0.5 * p_.mu * Kinv_tr_.xy) * ug;
        row -= 0.5 * (f_ff_(x, y)[1] + f_tr_(x, y)[1]);
        sys_.set_row(dof_.v(i, jf), row);
        return;
    }

    double H = hy_;
    LF gn, gs;
    int region_row = jf;
    if (jf == ny) {
        const StokesBC& bc = bc_.ff_top;
        const Vec2 d = bc.data(x, y);
        if (bc.kind == StokesBC::Kind::Velocity) {
            sys_.set_row(dof_.v(i, jf), V(i, jf) - d[1]);
            return;
        }
        H = 0.5 * hy_;
        gn = LF(d[1]);
        gs = gy_flux(i, ny - 1);
        region_row = ny - 1;
    } else if (jf == sb) {
        H = 0.5 * hy_;
        gn = gy_flux(i, sb);
        if (layout == Layout::StokesBox) {
            const StokesBC& bc = bc_.stokes_bottom;
            const Vec2 d = bc.data(x, y);
            if (bc.kind == StokesBC::Kind::Velocity) {
                sys_.set_row(dof_.v(i, jf), V(i, jf) - d[1]);
                return;
            }
            gs = LF(-d[1]);
        } else {
            // normal traction transmission condition on gamma_ff
            const ReducedCoefficients& rc = *rc_;
            const LF vff = V(i, sb);
            gs = rc.traction_n_vn * Vn(i) - Pg(i) + rc.traction_n_vff * vff + rc.traction_n_vpm * v_pm_[i] +
                 friction_ * (p_.beta.xy * ubar_gamma(i) + p_.beta.yy * vff) +
                 extra(red_->sources->extra.traction_n, x);
        }
    } else {
        gn = gy_flux(i, jf);
        gs = gy_flux(i, jf - 1);
    }

    LF row = -(gx_flux(i, jf, region_row) - gx_flux(i - 1, jf, region_row)) / hx_ - (gn - gs) / H;
    if (transition_row(region_row)) {
        row += (p_.mu * Kinv_tr_.yy) * V(i, jf);
        if (Kinv_tr_.xy != 0.0)
            row += (p_.mu * Kinv_tr_.xy * 0.25) * (U(i, jf - 1) + U(i + 1, jf - 1) + U(i, jf) + U(i + 1, jf));
        row -= f_tr_(x, y)[1];
    } else {
        row -= f_ff_(x, y)[1];
    }
    sys_.set_row(dof_.v(i, jf), row);
}

void Assembler::stokes_mass_row(int i, int j) {
    sys_.set_row(dof_.p(i, j), (U(i + 1, j) - U(i, j)) / hx_ + (V(i, j + 1) - V(i, j)) / hy_);
}

LinearForm Assembler::darcy_flux_boundary(const DarcyBC& bc, int i, int j, int side) const {
    const double Lx = g_.geometry().Lx;
    const double ytop = g_.darcy_face_y(g_.pm_rows());
    const int nx = g_.nx(), top = g_.pm_rows() - 1;
    const SymTensor2& K = p_.K_pm;
    const double mu = p_.mu;
    double x = 0.0, y = 0.0;
    switch (side) {
    case East: x = Lx, y = g_.cell_y(j); break;
    case West: x = 0.0, y = g_.cell_y(j); break;
    case North: x = g_.cell_x(i), y = ytop; break;
    default: x = g_.cell_x(i), y = 0.0; break;
    }
    const double val = bc.data(x, y);
    if (bc.kind == DarcyBC::Kind::NormalFlux) return LF(val);
    const LF gb(val);
    LF flux;
    switch (side) {
    case East: {
        flux = -(K.xx / mu) * -d_inward(gb, P(nx - 1, j), P(nx - 2, j), hx_);
        if (K.xy != 0.0) flux -= (K.xy / mu) * dpdy_cell(i, j);
        break;
    }
    case West: {
        flux = (K.xx / mu) * d_inward(gb, P(0, j), P(1, j), hx_);
        if (K.xy != 0.0) flux += (K.xy / mu) * dpdy_cell(i, j);
        break;
    }
    case North: {
        flux = -(K.yy / mu) * -d_inward(gb, P(i, top), P(i, top - 1), hy_);
        if (K.xy != 0.0) flux -= (K.xy / mu) * dpdx_cell(i, j);
        break;
    }
    default: {
        flux = (K.yy / mu) * d_inward(gb, P(i, 0), P(i, 1), hy_);
        if (K.xy != 0.0) flux += (K.xy / mu) * dpdx_cell(i, j);
        break;
    }
    }
    return flux;
}

void Assembler::darcy_row(int i, int j) {
    const int nx = g_.nx(), top = g_.pm_rows() - 1;
    const SymTensor2& K = p_.K_pm;
    const double mu = p_.mu;
    const bool cross = K.xy != 0.0;

    LF east, west, north, south;
    if (i < nx - 1) {
        east = -(K.xx / mu) * (P(i + 1, j) - P(i, j)) / hx_;
        if (cross) east -= (0.5 * K.xy / mu) * (dpdy_cell(i, j) + dpdy_cell(i + 1, j));
    } else {
        east = darcy_flux_boundary(bc_.pm_right, i, j, East);
    }
    if (i > 0) {
        west = (K.xx / mu) * (P(i, j) - P(i - 1, j)) / hx_;
        if (cross) west += (0.5 * K.xy / mu) * (dpdy_cell(i - 1, j) + dpdy_cell(i, j));
    } else {
        west = darcy_flux_boundary(bc_.pm_left, i, j, West);
    }
    if (j < top) {
        north = -(K.yy / mu) * (P(i, j + 1) - P(i, j)) / hy_;
        if (cross) north -= (0.5 * K.xy / mu) * (dpdx_cell(i, j) + dpdx_cell(i, j + 1));
    } else if (g_.layout() == Layout::DarcyBox) {
        north = darcy_flux_boundary(bc_.darcy_top, i, j, North);
    } else if (g_.layout() == Layout::Full) {
        north = V(i, g_.stokes_begin());
    } else {
        north = v_pm_[i];
    }
    if (j > 0) {
        south = (K.yy / mu) * (P(i, j) - P(i, j - 1)) / hy_;
        if (cross) south += (0.5 * K.xy / mu) * (dpdx_cell(i, j - 1) + dpdx_cell(i, j));
    } else {
        south = darcy_flux_boundary(bc_.pm_bottom, i, j, South);
    }
    LF row = (east + west) / hx_ + (north + south) / hy_;
    row -= q_(g_.cell_x(i), g_.cell_y(j));
    sys_.set_row(dof_.p(i, j), row);
}

LinearForm Assembler::vt_face(int k) const {
    const int nx = g_.nx();
    if (k == 0 || k == nx) {
        const GammaEndBC& e = k == 0 ? red_->gamma_bcs.left : red_->gamma_bcs.right;
        if (e.kind == GammaEndBC::Kind::Dirichlet) return LF(e.second);
        if (nx < 4) return k == 0 ? 1.5 * Vt(0) - 0.5 * Vt(1) : 1.5 * Vt(nx - 1) - 0.5 * Vt(nx - 2);
        auto ext = [&](int a, int s) {
            return (35.0 * Vt(a) - 35.0 * Vt(a + s) + 21.0 * Vt(a + 2 * s) - 5.0 * Vt(a + 3 * s)) * (1.0 / 16.0);
        };
        return k == 0 ? ext(0, 1) : ext(nx - 1, -1);
    }
    if (nx < 4) return 0.5 * (Vt(k - 1) + Vt(k));
    if (k == 1) return cubic_edge(Vt(0), Vt(1), Vt(2), Vt(3));
    if (k == nx - 1) return cubic_edge(Vt(nx - 1), Vt(nx - 2), Vt(nx - 3), Vt(nx - 4));
    return cubic_mid(Vt(k - 2), Vt(k - 1), Vt(k), Vt(k + 1));
}

LinearForm Assembler::vn_slope(int k) const {
    const int nx = g_.nx();
    if (k == 0 || k == nx) {
        const GammaEndBC& e = k == 0 ? red_->gamma_bcs.left : red_->gamma_bcs.right;
        if (e.kind == GammaEndBC::Kind::Neumann) return LF(e.first / p_.mu_eff);
        if (k == 0) return d_inward(LF(e.first), Vn(0), Vn(1), hx_);
        return -d_inward(LF(e.first), Vn(nx - 1), Vn(nx - 2), hx_);
    }
    return (Vn(k) - Vn(k - 1)) / hx_;
}

LinearForm Assembler::tangential_flux(int k) const {
    const int nx = g_.nx();
    const double mue = p_.mu_eff;
    if (k == 0 || k == nx) {
        const GammaEndBC& e = k == 0 ? red_->gamma_bcs.left : red_->gamma_bcs.right;
        if (e.kind == GammaEndBC::Kind::Neumann) return LF(e.second);
        if (k == 0) return mue * d_inward(LF(e.second), Vt(0), Vt(1), hx_) - (1.5 * Pg(0) - 0.5 * Pg(1));
        return -mue * d_inward(LF(e.second), Vt(nx - 1), Vt(nx - 2), hx_) - (1.5 * Pg(nx - 1) - 0.5 * Pg(nx - 2));
    }
    return mue * (Vt(k) - Vt(k - 1)) / hx_ - 0.5 * (Pg(k - 1) + Pg(k));
}

void Assembler::gamma_rows(int i) {
    const ReducedCoefficients& rc = *rc_;
    const SourceFieldsReduced& src = *red_->sources;
    const InterfaceData& ex = src.extra;
    const double x = g_.cell_x(i);
    const double d = g_.thickness();
    const int sb = g_.stokes_begin();
    const LF vff = V(i, sb);

    LF normal = rc.normal_vn * Vn(i) + rc.normal_p * Pg(i) -
                (d * p_.mu_eff / hx_) * (vn_slope(i + 1) - vn_slope(i)) - rc.normal_vff * vff -
                rc.normal_p * p_trace_[i];
    if (rc.normal_vt != 0.0) normal += rc.normal_vt * Vt(i);
    normal -= d * src.F_n(x) + extra(ex.normal, x);
    sys_.set_row(dof_.gamma_vn(i), normal);

    LF tangential = rc.tangential_vt * Vt(i) - (d / hx_) * (tangential_flux(i + 1) - tangential_flux(i)) -
                    rc.tangential_uff * ubar_gamma(i);
    if (rc.tangential_vn != 0.0) tangential += rc.tangential_vn * Vn(i);
    tangential -= d * src.F_tau(x) + extra(ex.tangential, x);
    sys_.set_row(dof_.gamma_vt(i), tangential);

    LF mass = vff - v_pm_[i] + (d / hx_) * (vt_face(i + 1) - vt_face(i));
    mass -= extra(ex.mass, x);
    sys_.set_row(dof_.gamma_p(i), mass);
}

LinearSystem Assembler::run() {
    const int nx = g_.nx(), ny = g_.ny();
    const int sb = g_.stokes_begin();
    build_traces();

    // Pressure is fixed up to a constant when no side prescribes a
    // traction or a pressure; pin cell (0, 0) in that case.
    bool level_fixed = false;
    auto stokes_side = [&](const StokesBC& b) { level_fixed |= b.kind == StokesBC::Kind::Traction; };
    auto darcy_side = [&](const DarcyBC& b) { level_fixed |= b.kind == DarcyBC::Kind::Pressure; };
    if (g_.has_stokes()) {
        stokes_side(bc_.ff_left), stokes_side(bc_.ff_right), stokes_side(bc_.ff_top);
        if (g_.layout() == Layout::StokesBox) stokes_side(bc_.stokes_bottom);
        if (g_.layout() == Layout::Full) stokes_side(bc_.tr_left), stokes_side(bc_.tr_right);
    }
    if (g_.has_darcy()) {
        darcy_side(bc_.pm_left), darcy_side(bc_.pm_right), darcy_side(bc_.pm_bottom);
        if (g_.layout() == Layout::DarcyBox) darcy_side(bc_.darcy_top);
    }
    if (red_) {
        level_fixed |= red_->gamma_bcs.left.kind == GammaEndBC::Kind::Neumann;
        level_fixed |= red_->gamma_bcs.right.kind == GammaEndBC::Kind::Neumann;
    }

    if (g_.has_stokes()) {
        for (int j = sb; j < ny; ++j)
            for (int i = 0; i <= nx; ++i) u_row(i, j);
        for (int jf = sb; jf <= ny; ++jf)
            for (int i = 0; i < nx; ++i) v_row(i, jf);
    }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (!level_fixed && i == 0 && j == 0) {
                sys_.set_row(dof_.p(0, 0), P(0, 0) - bc_.pressure_pin);
                continue;
            }
            if (j < g_.pm_rows())
                darcy_row(i, j);
            else
                stokes_mass_row(i, j);
        }
    if (red_)
        for (int i = 0; i < nx; ++i) gamma_rows(i);

    sys_.finalize();
    return std::move(sys_);
}

}  // namespace sbd::detail
