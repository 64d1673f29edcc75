#include "sbd/grid.hpp"

#include <cmath>
#include <sstream>

namespace sbd {

std::string to_string(Model m) { return m == Model::Full ? "full" : "reduced"; }

std::string to_string(Region r) {
    switch (r) {
    case Region::Darcy: return "pm";
    case Region::Transition: return "tr";
    case Region::FreeFlow: return "ff";
    }
    return "?";
}

namespace {

// Number of cells of size h in a length, or -1 when not an integer multiple.
int conforming_cells(double length, double h) {
    const double ratio = length / h;
    const double rounded = std::round(ratio);
    if (rounded < 0.0 || std::abs(ratio - rounded) > 1e-12 * std::max(1.0, rounded)) return -1;
    return static_cast<int>(rounded);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

Region StaggeredGrid::region_of_row(int j) const {
    if (j < pm_rows_) return Region::Darcy;
    if (j < pm_rows_ + tr_rows_) return Region::Transition;
    return Region::FreeFlow;
}

StaggeredGrid build_grid(const GeometryConfig& c, Model model) {
    if (c.nx < 2 || c.ny < 2) throw ValidationError("grid needs nx >= 2 and ny >= 2");
    if (!(c.Lx > 0.0) || !(c.Ly > 0.0)) throw ValidationError("domain extents must be positive");
    const double d = c.thickness();
    if (!(d > 0.0)) throw ValidationError("d must be positive (y_gamma_ff > y_gamma_pm)");
    if (!(c.y_gamma_pm > 0.0) || !(c.y_gamma_ff < c.Ly))
        throw ValidationError("require 0 < y_gamma_pm < y_gamma_ff < Ly");

    StaggeredGrid g;
    g.layout_ = model == Model::Full ? Layout::Full : Layout::Reduced;
    g.geom_ = c;
    g.nx_ = c.nx;
    g.ny_ = c.ny;
    g.hx_ = c.Lx / c.nx;
    g.hy_ = model == Model::Full ? c.Ly / c.ny : (c.Ly - d) / c.ny;

    const int pm = conforming_cells(c.y_gamma_pm, g.hy_);
    if (pm < 0)
        throw ValidationError("y_gamma_pm = " + fmt(c.y_gamma_pm) + " is not a multiple of hy = " + fmt(g.hy_));
    g.pm_rows_ = pm;
    if (model == Model::Full) {
        const int top = conforming_cells(c.y_gamma_ff, g.hy_);
        if (top < 0)
            throw ValidationError("y_gamma_ff = " + fmt(c.y_gamma_ff) + " is not a multiple of hy = " + fmt(g.hy_));
        g.tr_rows_ = top - pm;
    } else {
        const int ff = conforming_cells(c.Ly - c.y_gamma_ff, g.hy_);
        if (ff < 0 || pm + ff != c.ny)
            throw ValidationError("y_gamma_ff = " + fmt(c.y_gamma_ff) + " does not leave a multiple of hy = " +
                                  fmt(g.hy_) + " above the interface");
        g.tr_rows_ = 0;
    }
    if (g.pm_rows_ < 2) throw ValidationError("porous medium needs at least 2 cell rows");
    if (g.ff_rows() < 3) throw ValidationError("free flow needs at least 3 cell rows");
    if (model == Model::Full && g.tr_rows_ < 1) throw ValidationError("transition zone needs at least 1 cell row");
    return g;
}

StaggeredGrid build_stokes_box(double Lx, double Ly, int nx, int ny) {
    if (nx < 2 || ny < 2) throw ValidationError("grid needs nx >= 2 and ny >= 2");
    StaggeredGrid g;
    g.layout_ = Layout::StokesBox;
    g.geom_ = {Lx, Ly, 0.0, 0.0, nx, ny};
    g.nx_ = nx;
    g.ny_ = ny;
    g.hx_ = Lx / nx;
    g.hy_ = Ly / ny;
    return g;
}

StaggeredGrid build_darcy_box(double Lx, double Ly, int nx, int ny) {
    if (nx < 2 || ny < 2) throw ValidationError("grid needs nx >= 2 and ny >= 2");
    StaggeredGrid g;
    g.layout_ = Layout::DarcyBox;
    g.geom_ = {Lx, Ly, Ly, Ly, nx, ny};
    g.nx_ = nx;
    g.ny_ = ny;
    g.hx_ = Lx / nx;
    g.hy_ = Ly / ny;
    g.pm_rows_ = ny;
    return g;
}

DofMap::DofMap(const StaggeredGrid& g) : nx_(g.nx()), j0_(g.stokes_begin()) {
    const std::size_t rows = g.ny() - g.stokes_begin();
    nu_ = g.has_stokes() ? (nx_ + 1) * rows : 0;
    nv_ = g.has_stokes() ? nx_ * (rows + 1) : 0;
    np_ = std::size_t(nx_) * g.ny();
    ng_ = g.reduced() ? 3 * std::size_t(nx_) : 0;
}

DofLocation DofMap::locate(std::size_t k) const {
    if (k < nu_) return {Field::U, int(k % (nx_ + 1)), int(k / (nx_ + 1)) + j0_};
    k -= nu_;
    if (k < nv_) return {Field::V, int(k % nx_), int(k / nx_) + j0_};
    k -= nv_;
    if (k < np_) return {Field::P, int(k % nx_), int(k / nx_)};
    k -= np_;
    if (k < ng_) {
        const Field f = k < std::size_t(nx_) ? Field::GammaVn : (k < 2 * std::size_t(nx_) ? Field::GammaVt : Field::GammaP);
        return {f, int(k % nx_), 0};
    }
    throw std::out_of_range("DofMap::locate: index out of range");
}

std::size_t dof_count(const StaggeredGrid& grid) { return DofMap(grid).size(); }

}  // namespace sbd
