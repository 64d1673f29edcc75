#include "sbd/verification.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace sbd {

// exact fields

double MmsExact::u(double x, double y) const { return std::cos(x) * std::exp(y - y0_); }
double MmsExact::v(double x, double y) const { return std::sin(x) * std::exp(y - y0_); }
double MmsExact::p(double x, double y) const { return std::sin(x + y - y0_); }
double MmsExact::p_pm(double x, double y) const { return -100.0 * (y - y0_) * std::sin(x); }

double MmsExact::u_x(double x, double y) const { return -std::sin(x) * std::exp(y - y0_); }
double MmsExact::u_y(double x, double y) const { return u(x, y); }
double MmsExact::v_x(double x, double y) const { return std::cos(x) * std::exp(y - y0_); }
double MmsExact::v_y(double x, double y) const { return v(x, y); }
double MmsExact::p_x(double x, double y) const { return std::cos(x + y - y0_); }
double MmsExact::p_y(double x, double y) const { return std::cos(x + y - y0_); }
double MmsExact::p_pm_x(double x, double y) const { return -100.0 * (y - y0_) * std::cos(x); }
double MmsExact::p_pm_y(double x, double) const { return -100.0 * std::sin(x); }

namespace {
double growth(double d) { return std::expm1(d) / d; }
}  // namespace

double MmsExact::U(double s, double d) const { return std::cos(s) * growth(d); }
double MmsExact::V(double s, double d) const { return std::sin(s) * growth(d); }
double MmsExact::P(double s, double d) const { return -(std::cos(s + d) - std::cos(s)) / d; }
double MmsExact::U_s(double s, double d) const { return -std::sin(s) * growth(d); }
double MmsExact::U_ss(double s, double d) const { return -std::cos(s) * growth(d); }
double MmsExact::V_s(double s, double d) const { return std::cos(s) * growth(d); }
double MmsExact::V_ss(double s, double d) const { return -std::sin(s) * growth(d); }
double MmsExact::P_s(double s, double d) const { return (std::sin(s + d) - std::sin(s)) / d; }

// sources and boundary data

SourceFieldsFull mms_sources_full(const PhysicalParams& prm, double y0) {
    const MmsExact ex(y0);
    const SymTensor2 Kinv = prm.K_tr.inverse();
    const double mu = prm.mu;
    const SymTensor2 K = prm.K_pm;
    SourceFieldsFull s;
    // Both velocity components are harmonic, so -div T reduces to grad p.
    s.f_ff = [ex](double x, double y) { return Vec2{ex.p_x(x, y), ex.p_y(x, y)}; };
    s.f_tr = [ex, Kinv, mu](double x, double y) {
        const Vec2 r = Kinv.apply({ex.u(x, y), ex.v(x, y)});
        return Vec2{mu * r[0] + ex.p_x(x, y), mu * r[1] + ex.p_y(x, y)};
    };
    // p_xx = 100 (y - y0) sin x, p_xy = -100 cos x, p_yy = 0
    s.q = [K, mu, y0](double x, double y) {
        return -(K.xx * 100.0 * (y - y0) * std::sin(x) - 2.0 * K.xy * 100.0 * std::cos(x)) / mu;
    };
    return s;
}

SourceFieldsReduced mms_sources_reduced(const PhysicalParams& prm, const ClosureProfile& profile, double y0, double d,
                                        bool closure_defect) {
    const MmsExact ex(y0);
    const double mu = prm.mu;
    const double Mtt = m_projection(prm.K_tr, {1, 0}, {1, 0});
    const double Mtn = m_projection(prm.K_tr, {1, 0}, {0, 1});
    const double Mnn = m_projection(prm.K_tr, {0, 1}, {0, 1});
    SourceFieldsReduced s;
    const SourceFieldsFull full = mms_sources_full(prm, y0);
    s.f_ff = full.f_ff;
    s.q = full.q;
    // mean of cos(s + n) over n in [0, d]
    auto mean_grad_p = [d](double x) { return (std::sin(x + d) - std::sin(x)) / d; };
    s.F_tau = [=](double x) { return mu * (Mtt * ex.U(x, d) + Mtn * ex.V(x, d)) + mean_grad_p(x); };
    s.F_n = [=](double x) { return mu * (Mtn * ex.U(x, d) + Mnn * ex.V(x, d)) + mean_grad_p(x); };
    if (!closure_defect) return s;

    const ReducedCoefficients rc = reduced_coefficients(prm, profile, d);
    const auto [l1, l2] = closure_params(profile);
    const double mue = prm.mu_eff;
    const double yf = y0 + d;
    const SymTensor2 K = prm.K_pm;
    const SymTensor2 beta = prm.beta;
    const SourceFieldsReduced base = s;
    auto vpm = [=](double x) { return -(K.xy * ex.p_pm_x(x, y0) + K.yy * ex.p_pm_y(x, y0)) / mu; };

    s.extra.mass = [=](double x) { return ex.v(x, yf) - vpm(x) + d * ex.U_s(x, d); };
    s.extra.traction_n = [=](double x) {
        const double model = rc.traction_n_vn * ex.V(x, d) - ex.P(x, d) + rc.traction_n_vff * ex.v(x, yf) +
                             rc.traction_n_vpm * vpm(x) +
                             rc.friction * (beta.xy * ex.u(x, yf) + beta.yy * ex.v(x, yf));
        return mu * ex.v_y(x, yf) - ex.p(x, yf) - model;
    };
    s.extra.traction_t = [=](double x) {
        const double model = rc.traction_t_vt * ex.U(x, d) + rc.traction_t_uff * ex.u(x, yf) +
                             rc.friction * (beta.xx * ex.u(x, yf) + beta.xy * ex.v(x, yf));
        return mu * ex.u_y(x, yf) - model;
    };
    s.extra.pressure = [=](double x) {
        const double model =
            -mue / d * ((l1 + l2) * ex.V(x, d) - l2 * ex.v(x, yf) - l1 * vpm(x)) + ex.P(x, d);
        return ex.p_pm(x, y0) - model;
    };
    s.extra.normal = [=](double x) {
        return rc.normal_vn * ex.V(x, d) + rc.normal_vt * ex.U(x, d) - d * mue * ex.V_ss(x, d) +
               rc.normal_p * ex.P(x, d) - d * base.F_n(x) - rc.normal_vff * ex.v(x, yf) -
               rc.normal_p * ex.p_pm(x, y0);
    };
    s.extra.tangential = [=](double x) {
        return rc.tangential_vt * ex.U(x, d) + rc.tangential_vn * ex.V(x, d) -
               d * (mue * ex.U_ss(x, d) - ex.P_s(x, d)) - d * base.F_tau(x) - rc.tangential_uff * ex.u(x, yf);
    };
    return s;
}

namespace {

StokesBC exact_velocity(const MmsExact& ex) {
    return StokesBC::velocity([ex](double x, double y) { return Vec2{ex.u(x, y), ex.v(x, y)}; });
}

DarcyBC exact_pressure(const MmsExact& ex) {
    return DarcyBC::pressure([ex](double x, double y) { return ex.p_pm(x, y); });
}

}  // namespace

BoundarySpec mms_bcs_full(const PhysicalParams&, double y0, double, double) {
    const MmsExact ex(y0);
    BoundarySpec b;
    b.ff_left = b.ff_right = b.ff_top = exact_velocity(ex);
    b.tr_left = b.tr_right = exact_velocity(ex);
    b.stokes_bottom = exact_velocity(ex);
    b.pm_left = b.pm_right = b.pm_bottom = exact_pressure(ex);
    b.darcy_top = exact_pressure(ex);
    return b;
}

BoundarySpec mms_bcs_reduced(const PhysicalParams& prm, double y0, double, double) {
    const MmsExact ex(y0);
    const double mu = prm.mu;
    BoundarySpec b = mms_bcs_full(prm, y0, 0.0, 0.0);
    b.ff_left = StokesBC::traction([ex, mu](double x, double y) {
        return Vec2{-(mu * ex.u_x(x, y) - ex.p(x, y)), -mu * ex.v_x(x, y)};
    });
    b.ff_right = StokesBC::traction([ex, mu](double x, double y) {
        return Vec2{mu * ex.u_x(x, y) - ex.p(x, y), mu * ex.v_x(x, y)};
    });
    return b;
}

GammaBoundarySpec mms_gamma_bcs(const PhysicalParams& prm, double y0, double d, double Lx) {
    const MmsExact ex(y0);
    const double mue = prm.mu_eff;
    auto end = [&](double s) {
        return GammaEndBC::neumann(mue * ex.V_s(s, d), mue * ex.U_s(s, d) - ex.P(s, d));
    };
    return {end(0.0), end(Lx)};
}

GeometryConfig mms_geometry(Model model, int nx) {
    if (model == Model::Full) return {1.0, 2.0, 0.9, 1.1, nx, 2 * nx};
    const double d = kMmsReducedThickness;
    return {1.0, 1.0 + d, 0.5, 0.5 + d, nx, nx};
}

PhysicalParams mms_params() { return PhysicalParams{}; }

MmsProblem build_mms_problem(Model model, const GeometryConfig& geo, const PhysicalParams& prm,
                             const MmsOptions& opt) {
    StaggeredGrid grid = build_grid(geo, model);
    const MmsExact ex(geo.y_gamma_pm);
    if (model == Model::Full) {
        LinearSystem sys = assemble_full(grid, prm, mms_sources_full(prm, geo.y_gamma_pm),
                                         mms_bcs_full(prm, geo.y_gamma_pm, geo.Lx, geo.Ly));
        return {std::move(grid), std::move(sys), ex};
    }
    const double d = geo.thickness();
    const SourceFieldsReduced src = mms_sources_reduced(prm, opt.profile, geo.y_gamma_pm, d, opt.closure_defect);
    LinearSystem sys = assemble_reduced(grid, prm, opt.profile, src, mms_bcs_reduced(prm, geo.y_gamma_pm, geo.Lx, geo.Ly),
                                        mms_gamma_bcs(prm, geo.y_gamma_pm, d, geo.Lx));
    return {std::move(grid), std::move(sys), ex};
}

Vector sample_exact(const StaggeredGrid& g, const MmsExact& ex) {
    const DofMap dof(g);
    Vector x(dof.size());
    const int nx = g.nx(), ny = g.ny(), sb = g.stokes_begin();
    if (g.has_stokes()) {
        for (int j = sb; j < ny; ++j)
            for (int i = 0; i <= nx; ++i) x[dof.u(i, j)] = ex.u(g.face_x(i), g.cell_y(j));
        for (int j = sb; j <= ny; ++j)
            for (int i = 0; i < nx; ++i) x[dof.v(i, j)] = ex.v(g.cell_x(i), g.stokes_face_y(j));
    }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            x[dof.p(i, j)] = j < g.pm_rows() ? ex.p_pm(g.cell_x(i), g.cell_y(j)) : ex.p(g.cell_x(i), g.cell_y(j));
    if (g.reduced()) {
        const double d = g.thickness();
        for (int i = 0; i < nx; ++i) {
            const double s = g.cell_x(i);
            x[dof.gamma_vn(i)] = ex.V(s, d);
            x[dof.gamma_vt(i)] = ex.U(s, d);
            x[dof.gamma_p(i)] = ex.P(s, d);
        }
    }
    return x;
}

// errors

std::string to_string(FieldId f) {
    switch (f) {
    case FieldId::UFF: return "u_ff";
    case FieldId::VFF: return "v_ff";
    case FieldId::PFF: return "p_ff";
    case FieldId::UTR: return "u_tr";
    case FieldId::VTR: return "v_tr";
    case FieldId::PTR: return "p_tr";
    case FieldId::PPM: return "p_pm";
    case FieldId::U: return "U";
    case FieldId::V: return "V";
    case FieldId::P: return "P";
    }
    return "?";
}

std::vector<FieldId> fields_for(Model model) {
    if (model == Model::Full)
        return {FieldId::UFF, FieldId::VFF, FieldId::PFF, FieldId::UTR, FieldId::VTR, FieldId::PTR, FieldId::PPM};
    return {FieldId::UFF, FieldId::VFF, FieldId::PFF, FieldId::PPM, FieldId::U, FieldId::V, FieldId::P};
}

double l2_error(const std::vector<double>& numeric, const std::vector<double>& exact, double weight) {
    if (numeric.size() != exact.size()) throw ValidationError("l2_error: numeric and exact samples differ in length");
    double s = 0.0;
    for (std::size_t k = 0; k < numeric.size(); ++k) s += (exact[k] - numeric[k]) * (exact[k] - numeric[k]);
    return std::sqrt(weight * s);
}

FieldSample sample_field(const Solution& sol, FieldId f, const MmsExact& ex) {
    const StaggeredGrid& g = sol.grid();
    const int nx = g.nx(), ny = g.ny();
    const int sb = g.stokes_begin(), fb = g.ff_begin();
    const bool full = g.layout() == Layout::Full;
    FieldSample out;
    out.weight = g.hx() * g.hy();
    auto need = [&](bool ok) {
        if (!ok) throw ValidationError("field " + to_string(f) + " does not exist on this grid");
    };
    auto u_rows = [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i <= nx; ++i) {
                out.numeric.push_back(sol.u(i, j));
                out.exact.push_back(ex.u(g.face_x(i), g.cell_y(j)));
            }
    };
    auto v_rows = [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < nx; ++i) {
                out.numeric.push_back(sol.v(i, j));
                out.exact.push_back(ex.v(g.cell_x(i), g.stokes_face_y(j)));
            }
    };
    auto p_rows = [&](int j0, int j1, bool darcy) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < nx; ++i) {
                out.numeric.push_back(sol.p(i, j));
                out.exact.push_back(darcy ? ex.p_pm(g.cell_x(i), g.cell_y(j)) : ex.p(g.cell_x(i), g.cell_y(j)));
            }
    };
    auto line = [&](auto numeric, auto exact) {
        need(g.reduced());
        out.weight = g.hx();
        for (int i = 0; i < nx; ++i) {
            out.numeric.push_back(numeric(i));
            out.exact.push_back(exact(g.cell_x(i)));
        }
    };
    const double d = g.thickness();
    switch (f) {
    case FieldId::UFF: need(g.has_stokes()); u_rows(fb, ny); break;
    case FieldId::VFF: need(g.has_stokes()); v_rows(fb, ny + 1); break;
    case FieldId::PFF: need(g.has_stokes()); p_rows(fb, ny, false); break;
    case FieldId::UTR: need(full); u_rows(sb, fb); break;
    case FieldId::VTR: need(full); v_rows(sb, fb); break;
    case FieldId::PTR: need(full); p_rows(sb, fb, false); break;
    case FieldId::PPM: need(g.has_darcy()); p_rows(0, g.pm_rows(), true); break;
    case FieldId::U: line([&](int i) { return sol.Vt(i); }, [&](double s) { return ex.U(s, d); }); break;
    case FieldId::V: line([&](int i) { return sol.Vn(i); }, [&](double s) { return ex.V(s, d); }); break;
    case FieldId::P: line([&](int i) { return sol.P(i); }, [&](double s) { return ex.P(s, d); }); break;
    }
    return out;
}

// convergence

OrderTable observed_orders(const std::vector<double>& h, const std::vector<double>& e) {
    if (h.size() != e.size() || h.size() < 2) throw ValidationError("observed_orders: need matching h and error lists");
    OrderTable t;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double x : e) t.undefined |= !(x > 0.0) || !std::isfinite(x);
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        const bool ok = e[k] > 0.0 && e[k + 1] > 0.0 && std::isfinite(e[k]) && std::isfinite(e[k + 1]);
        t.pairwise.push_back(ok ? std::log(e[k] / e[k + 1]) / std::log(h[k] / h[k + 1]) : nan);
    }
    if (t.undefined) {
        t.slope = nan;
        return t;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double lx = std::log(h[k]), ly = std::log(e[k]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    t.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return t;
}

namespace {

void check_sequence(const std::vector<GeometryConfig>& grids) {
    if (grids.size() < 3) throw ValidationError("a convergence study needs at least three grids");
    for (std::size_t k = 0; k + 1 < grids.size(); ++k) {
        const GeometryConfig& a = grids[k];
        const GeometryConfig& b = grids[k + 1];
        const bool same = a.Lx == b.Lx && a.Ly == b.Ly && a.y_gamma_pm == b.y_gamma_pm && a.y_gamma_ff == b.y_gamma_ff;
        if (!same || b.nx != 2 * a.nx || b.ny != 2 * a.ny)
            throw ValidationError("grid sequence is not nested: level " + std::to_string(k + 1) +
                                  " does not refine level " + std::to_string(k) + " by two");
    }
}

}  // namespace

ConvergenceReport convergence_study(Model model, const std::vector<GeometryConfig>& grids,
                                    const PhysicalParams& prm, const MmsOptions& opt) {
    check_sequence(grids);
    ConvergenceReport rep;
    rep.model = model;
    for (const GeometryConfig& geo : grids) {
        const double c0 = cpu_time_now();
        MmsProblem pb = build_mms_problem(model, geo, prm, opt);
        SolveReport sr = solve(pb.system, opt.solver);
        LevelResult lv;
        lv.cpu_seconds = cpu_time_now() - c0;
        lv.nx = geo.nx;
        lv.ny = geo.ny;
        lv.h = pb.grid.hx();
        lv.unknowns = pb.system.size();
        lv.relative_residual = sr.relative_residual;
        const Solution sol(pb.grid, std::move(sr.x));
        for (FieldId f : fields_for(model)) {
            const FieldSample s = sample_field(sol, f, pb.exact);
            lv.errors[f] = l2_error(s.numeric, s.exact, s.weight);
        }
        rep.levels.push_back(std::move(lv));
    }
    std::vector<double> hs;
    for (const LevelResult& lv : rep.levels) hs.push_back(lv.h);
    for (FieldId f : fields_for(model)) {
        std::vector<double> es;
        for (const LevelResult& lv : rep.levels) es.push_back(lv.errors.at(f));
        rep.orders[f] = observed_orders(hs, es);
    }
    return rep;
}

void write_convergence_csv(const ConvergenceReport& rep, std::ostream& os) {
    os << "h,field,error,order\n";
    os << std::setprecision(17);
    for (FieldId f : fields_for(rep.model)) {
        const OrderTable& t = rep.orders.at(f);
        for (std::size_t k = 0; k < rep.levels.size(); ++k) {
            os << rep.levels[k].h << ',' << to_string(f) << ',' << rep.levels[k].errors.at(f) << ',';
            if (k > 0) os << t.pairwise[k - 1];
            os << '\n';
        }
    }
}

double consistency_residual(const StaggeredGrid& g, const LinearSystem& sys, const Vector& x) {
    const Vector r = sys.matrix() * x - sys.rhs();
    const DofMap dof(g);
    const double area = g.hx() * g.hy();
    double s = 0.0;
    for (Eigen::Index k = 0; k < r.size(); ++k) {
        const Field f = dof.locate(static_cast<std::size_t>(k)).field;
        const bool line = f == Field::GammaVn || f == Field::GammaVt || f == Field::GammaP;
        s += std::abs(r[k]) * (line ? g.hx() : area);
    }
    return s;
}

ConsistencyReport consistency_study(Model model, const std::vector<GeometryConfig>& grids,
                                    const PhysicalParams& prm, const MmsOptions& opt) {
    check_sequence(grids);
    ConsistencyReport rep;
    for (const GeometryConfig& geo : grids) {
        const MmsProblem pb = build_mms_problem(model, geo, prm, opt);
        rep.h.push_back(pb.grid.hx());
        rep.residual.push_back(consistency_residual(pb.grid, pb.system, sample_exact(pb.grid, pb.exact)));
    }
    rep.orders = observed_orders(rep.h, rep.residual);
    return rep;
}

}  // namespace sbd
