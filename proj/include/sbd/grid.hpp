#pragma once

/**
 * @file grid.hpp
 * @brief Uniform MAC grids over the layered domain and unknown numbering.
 *
 * Cell rows are numbered bottom to top. Rows [0, pm_rows) belong to the
 * porous medium, the next tr_rows rows to the transition zone (full model
 * only) and the remaining rows to the free flow. In the reduced model the
 * strip (y_gamma_pm, y_gamma_ff) carries no cells: free-flow rows start at
 * y_gamma_ff, so every free-flow coordinate is shifted by the thickness d.
 *
 * Velocity u lives on vertical faces, v on horizontal faces, p at cell
 * centres. Stokes/Brinkman velocities exist only in rows >= pm_rows; the
 * horizontal face row pm_rows is gamma_pm in the full model and gamma_ff in
 * the reduced model.
 */

#include <cstddef>
#include <string>

#include "sbd/core.hpp"

namespace sbd {

enum class Model { Full, Reduced };

/// Full/Reduced are the coupled layouts; the boxes are single-region
/// layouts used for unit checks of the Stokes and Darcy stencils.
enum class Layout { Full, Reduced, StokesBox, DarcyBox };

enum class Region { Darcy, Transition, FreeFlow };

std::string to_string(Model m);
std::string to_string(Region r);

struct GeometryConfig {
    double Lx = 1.0;
    double Ly = 2.0;
    double y_gamma_pm = 0.9;
    double y_gamma_ff = 1.1;
    int nx = 10;
    /// Full: cell rows over [0, Ly]. Reduced: bulk cell rows over
    /// [0, y_gamma_pm] plus [y_gamma_ff, Ly].
    int ny = 20;

    double thickness() const { return y_gamma_ff - y_gamma_pm; }
    bool operator==(const GeometryConfig&) const = default;
};

class StaggeredGrid {
public:
    Layout layout() const { return layout_; }
    const GeometryConfig& geometry() const { return geom_; }
    bool reduced() const { return layout_ == Layout::Reduced; }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double thickness() const { return reduced() || layout_ == Layout::Full ? geom_.thickness() : 0.0; }

    int pm_rows() const { return pm_rows_; }
    int tr_rows() const { return tr_rows_; }
    int ff_rows() const { return ny_ - pm_rows_ - tr_rows_; }
    /// First row carrying Stokes/Brinkman velocities.
    int stokes_begin() const { return pm_rows_; }
    /// First free-flow row; the face row with this index is gamma_ff.
    int ff_begin() const { return pm_rows_ + tr_rows_; }
    bool has_darcy() const { return pm_rows_ > 0; }
    bool has_stokes() const { return pm_rows_ < ny_; }

    Region region_of_row(int j) const;

    double cell_x(int i) const { return (i + 0.5) * hx_; }
    double face_x(int i) const { return i * hx_; }
    double cell_y(int j) const { return (j + 0.5) * hy_ + shift(j); }
    /// y of horizontal face row j seen from the Stokes side (j >= stokes_begin()).
    double stokes_face_y(int j) const { return j * hy_ + (reduced() ? geom_.thickness() : 0.0); }
    /// y of horizontal face row j seen from the Darcy side (j <= pm_rows()).
    double darcy_face_y(int j) const { return j * hy_; }
    /// Abscissa line used to report gamma unknowns.
    double gamma_line_y() const { return 0.5 * (geom_.y_gamma_pm + geom_.y_gamma_ff); }

    friend StaggeredGrid build_grid(const GeometryConfig& config, Model model);
    friend StaggeredGrid build_stokes_box(double Lx, double Ly, int nx, int ny);
    friend StaggeredGrid build_darcy_box(double Lx, double Ly, int nx, int ny);

private:
    double shift(int j) const { return reduced() && j >= pm_rows_ ? geom_.thickness() : 0.0; }

    Layout layout_ = Layout::Full;
    GeometryConfig geom_{};
    int nx_ = 0;
    int ny_ = 0;
    double hx_ = 0.0;
    double hy_ = 0.0;
    int pm_rows_ = 0;
    int tr_rows_ = 0;
};

/// Throws ValidationError when the interface lines do not coincide with
/// grid lines (the message names the offending coordinate).
StaggeredGrid build_grid(const GeometryConfig& config, Model model);
StaggeredGrid build_stokes_box(double Lx, double Ly, int nx, int ny);
StaggeredGrid build_darcy_box(double Lx, double Ly, int nx, int ny);

enum class Field { U, V, P, GammaVn, GammaVt, GammaP };

struct DofLocation {
    Field field;
    int i;
    int j;  ///< unused (0) for gamma unknowns
};

/// Global numbering: by field (u, v, p, Vn, Vt, P), then lexicographic with
/// i fastest. Dirichlet boundary faces are kept as unknowns.
class DofMap {
public:
    explicit DofMap(const StaggeredGrid& grid);

    std::size_t u(int i, int j) const { return i + std::size_t(nx_ + 1) * (j - j0_); }
    std::size_t v(int i, int j) const { return nu_ + i + std::size_t(nx_) * (j - j0_); }
    std::size_t p(int i, int j) const { return nu_ + nv_ + i + std::size_t(nx_) * j; }
    std::size_t gamma_vn(int i) const { return nu_ + nv_ + np_ + i; }
    std::size_t gamma_vt(int i) const { return nu_ + nv_ + np_ + nx_ + i; }
    std::size_t gamma_p(int i) const { return nu_ + nv_ + np_ + 2 * std::size_t(nx_) + i; }

    std::size_t num_u() const { return nu_; }
    std::size_t num_v() const { return nv_; }
    std::size_t num_p() const { return np_; }
    std::size_t num_gamma() const { return ng_; }
    std::size_t size() const { return nu_ + nv_ + np_ + ng_; }

    DofLocation locate(std::size_t index) const;

private:
    int nx_;
    int j0_;
    std::size_t nu_, nv_, np_, ng_;
};

/// Total number of unknowns, including gamma unknowns (3 nx) when reduced.
std::size_t dof_count(const StaggeredGrid& grid);

}  // namespace sbd
