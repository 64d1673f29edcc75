#pragma once

/**
 * @file problem.hpp
 * @brief Boundary conditions and source terms consumed by the assemblers.
 */

#include <functional>

#include "sbd/core.hpp"

namespace sbd {

using ScalarField = std::function<double(double x, double y)>;
using VectorField = std::function<Vec2(double x, double y)>;
/// Function of the tangential coordinate s along the interface.
using LineField = std::function<double(double s)>;

/// Stokes/Brinkman boundary segment: prescribed velocity, or prescribed
/// traction T n_out (n_out the outward unit normal).
struct StokesBC {
    enum class Kind { Velocity, Traction };
    Kind kind = Kind::Velocity;
    VectorField data = [](double, double) { return Vec2{0.0, 0.0}; };

    static StokesBC velocity(VectorField g) { return {Kind::Velocity, std::move(g)}; }
    static StokesBC traction(VectorField t) { return {Kind::Traction, std::move(t)}; }
    static StokesBC no_slip() { return {}; }
    static StokesBC do_nothing() { return {Kind::Traction, [](double, double) { return Vec2{0.0, 0.0}; }}; }
};

/// Darcy boundary segment: prescribed pressure, or prescribed outward flux v.n_out.
struct DarcyBC {
    enum class Kind { Pressure, NormalFlux };
    Kind kind = Kind::NormalFlux;
    ScalarField data = [](double, double) { return 0.0; };

    static DarcyBC pressure(ScalarField p) { return {Kind::Pressure, std::move(p)}; }
    static DarcyBC normal_flux(ScalarField f) { return {Kind::NormalFlux, std::move(f)}; }
    static DarcyBC no_flow() { return {}; }
};

/// Outer boundary of the layered domain. Left/right sides are split by
/// region; the transition entries are ignored by the reduced model. The
/// `stokes_bottom` and `darcy_top` entries only apply to the single-region
/// box layouts.
struct BoundarySpec {
    StokesBC ff_left, ff_right, ff_top;
    StokesBC tr_left, tr_right;
    StokesBC stokes_bottom;
    DarcyBC pm_left, pm_right, pm_bottom;
    DarcyBC darcy_top;
    /// Pressure value fixed in cell (0, 0) of a box with velocity data on
    /// every side, where the pressure is otherwise determined up to a constant.
    double pressure_pin = 0.0;
};

struct SourceFieldsFull {
    VectorField f_ff = [](double, double) { return Vec2{0.0, 0.0}; };
    VectorField f_tr = [](double, double) { return Vec2{0.0, 0.0}; };
    ScalarField q = [](double, double) { return 0.0; };
};

/// Additive data in the interface equations of the reduced model. All
/// entries vanish for physical problems; manufactured solutions that do not
/// satisfy the closure assumptions exactly use them to absorb the defect.
struct InterfaceData {
    LineField mass;        ///< right-hand side of the averaged mass balance
    LineField normal;      ///< right-hand side of the normal momentum row
    LineField tangential;  ///< right-hand side of the tangential momentum row
    LineField traction_n;  ///< added to the normal traction transmission condition
    LineField traction_t;  ///< added to the tangential traction transmission condition
    LineField pressure;    ///< added to the porous-side pressure transmission condition
};

struct SourceFieldsReduced {
    VectorField f_ff = [](double, double) { return Vec2{0.0, 0.0}; };
    ScalarField q = [](double, double) { return 0.0; };
    LineField F_n = [](double) { return 0.0; };
    LineField F_tau = [](double) { return 0.0; };
    InterfaceData extra{};
};

/// Condition at one end point of the interface line. Dirichlet prescribes
/// (V_n, V_tau); Neumann prescribes T_n = mu_eff dV_n/ds and
/// T_tau = mu_eff dV_tau/ds - P at that end.
struct GammaEndBC {
    enum class Kind { Dirichlet, Neumann };
    Kind kind = Kind::Dirichlet;
    double first = 0.0;   ///< V_n or T_n
    double second = 0.0;  ///< V_tau or T_tau

    static GammaEndBC dirichlet(double vn, double vt) { return {Kind::Dirichlet, vn, vt}; }
    static GammaEndBC neumann(double tn, double tt) { return {Kind::Neumann, tn, tt}; }
};

struct GammaBoundarySpec {
    GammaEndBC left{};
    GammaEndBC right{};
};

}  // namespace sbd
