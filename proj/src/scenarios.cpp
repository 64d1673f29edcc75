#include "sbd/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace sbd {

PhysicalParams filtration_params() {
    PhysicalParams p;
    p.mu = 1e-3;
    p.mu_eff = 1e-3;
    p.alpha = 1.0;
    p.beta = SymTensor2::zero();
    p.K_tr = SymTensor2::isotropic(1e-3);
    p.K_pm = SymTensor2::isotropic(1e-8);
    return p;
}

namespace {

int cells(double length, double h, const char* what) {
    const double n = length / h;
    const int k = static_cast<int>(std::lround(n));
    if (k < 1 || std::abs(n - k) > 1e-8 * std::max(1.0, n))
        throw ValidationError(std::string("h = ") + std::to_string(h) + " does not divide " + what + " = " +
                              std::to_string(length));
    return k;
}

}  // namespace

GeometryConfig filtration_geometry(const FiltrationConfig& c, Model model) {
    const double d = c.y_gamma_ff - c.y_gamma_pm;
    const int nx = cells(c.Lx, c.h, "Lx");
    cells(c.y_gamma_pm, c.h, "y_gamma_pm");
    cells(d, c.h, "the transition thickness");
    const int ny = model == Model::Full ? cells(c.Ly, c.h, "Ly") : cells(c.Ly - d, c.h, "Ly - d");
    return {c.Lx, c.Ly, c.y_gamma_pm, c.y_gamma_ff, nx, ny};
}

double filtration_inflow(double x) {
    if (x < 0.25 || x > 0.75) return 0.0;
    return -0.1 * (x - 0.25) * (x - 0.75);
}

FiltrationBCs filtration_bcs() {
    BoundarySpec b;
    b.ff_left = StokesBC::no_slip();
    b.ff_top = StokesBC::no_slip();
    b.ff_right = StokesBC::do_nothing();
    b.tr_left = StokesBC::no_slip();
    b.tr_right = StokesBC::no_slip();
    b.pm_left = DarcyBC::no_flow();
    b.pm_right = DarcyBC::no_flow();
    b.pm_bottom = DarcyBC::normal_flux([](double x, double) { return -filtration_inflow(x); });
    return {b, b, {GammaEndBC::dirichlet(0.0, 0.0), GammaEndBC::dirichlet(0.0, 0.0)}};
}

GammaAverages average_full_across_transition(const Solution& s) {
    const StaggeredGrid& g = s.grid();
    if (g.layout() != Layout::Full) throw ValidationError("transition averages need a full-model solution");
    const int nx = g.nx(), sb = g.stokes_begin(), fb = g.ff_begin(), m = g.tr_rows();
    GammaAverages a;
    std::vector<double> uf(nx + 1, 0.0);
    for (int k = 0; k <= nx; ++k) {
        for (int j = sb; j < fb; ++j) uf[k] += s.u(k, j);
        uf[k] /= m;
    }
    for (int i = 0; i < nx; ++i) {
        a.u.push_back(0.5 * (uf[i] + uf[i + 1]));
        double v = 0.5 * (s.v(i, sb) + s.v(i, fb)), p = 0.0;
        for (int j = sb + 1; j < fb; ++j) v += s.v(i, j);
        for (int j = sb; j < fb; ++j) p += s.p(i, j);
        a.v.push_back(v / m);
        a.p.push_back(p / m);
    }
    return a;
}

GammaAverages gamma_unknowns(const Solution& s) {
    const StaggeredGrid& g = s.grid();
    if (!g.reduced()) throw ValidationError("interface unknowns need a reduced-model solution");
    GammaAverages a;
    for (int i = 0; i < g.nx(); ++i) {
        a.u.push_back(s.Vt(i));
        a.v.push_back(s.Vn(i));
        a.p.push_back(s.P(i));
    }
    return a;
}

namespace {

double relative_l2(const std::vector<double>& ref, const std::vector<double>& other) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        num += (ref[k] - other[k]) * (ref[k] - other[k]);
        den += ref[k] * ref[k];
    }
    if (std::sqrt(den) < 1e-14) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(num / den);
}

}  // namespace

Deviations relative_deviations(const GammaAverages& a, const GammaAverages& b) {
    const std::size_t n = a.u.size();
    if (a.v.size() != n || a.p.size() != n || b.u.size() != n || b.v.size() != n || b.p.size() != n)
        throw ValidationError("relative_deviations: interface arrays differ in length");
    return {relative_l2(a.u, b.u), relative_l2(a.v, b.v), relative_l2(a.p, b.p)};
}

LineProfile extract_profile(const Solution& s, double y) {
    const StaggeredGrid& g = s.grid();
    if (!g.has_stokes()) throw ValidationError("extract_profile: no Stokes region");
    const int sb = g.stokes_begin(), ny = g.ny(), nx = g.nx();
    const double t = (y - g.stokes_face_y(sb)) / g.hy();
    const int jf = static_cast<int>(std::lround(t));
    if (std::abs(t - jf) > 1e-8 || jf < 0 || jf > ny - sb)
        throw ValidationError("extract_profile: y = " + std::to_string(y) + " is not a grid line");
    const int row = sb + jf;
    LineProfile out;
    out.y = y;
    auto u_line = [&](int k) {
        if (row == sb) return (15.0 * s.u(k, sb) - 10.0 * s.u(k, sb + 1) + 3.0 * s.u(k, sb + 2)) / 8.0;
        if (row == ny) return (15.0 * s.u(k, ny - 1) - 10.0 * s.u(k, ny - 2) + 3.0 * s.u(k, ny - 3)) / 8.0;
        return 0.5 * (s.u(k, row - 1) + s.u(k, row));
    };
    for (int i = 0; i < nx; ++i) {
        out.x.push_back(g.cell_x(i));
        out.u.push_back(0.5 * (u_line(i) + u_line(i + 1)));
        out.v.push_back(s.v(i, row));
    }
    return out;
}

double filtration_mass_imbalance(const Solution& s) {
    const StaggeredGrid& g = s.grid();
    double in = 0.0, out = 0.0;
    for (int i = 0; i < g.nx(); ++i) in += filtration_inflow(g.cell_x(i)) * g.hx();
    for (int j = g.stokes_begin(); j < g.ny(); ++j) out += (s.u(g.nx(), j) - s.u(0, j)) * g.hy();
    for (int i = 0; i < g.nx(); ++i) out += s.v(i, g.ny()) * g.hx();
    return std::abs(out - in) / in;
}

namespace {

template <class Assemble>
ModelRun timed_run(const StaggeredGrid& grid, const FiltrationConfig& c, Assemble assemble) {
    const int repeats = std::max(1, c.timing_repeats);
    double best_asm = std::numeric_limits<double>::infinity(), best_solve = best_asm;
    Vector x;
    SolveReport last;
    std::size_t n = 0;
    for (int r = 0; r < repeats; ++r) {
        const double t0 = cpu_time_now();
        LinearSystem sys = assemble();
        const double t1 = cpu_time_now();
        last = solve(sys, c.solver);
        const double t2 = cpu_time_now();
        best_asm = std::min(best_asm, t1 - t0);
        best_solve = std::min(best_solve, t2 - t1);
        n = sys.size();
    }
    ModelRun run{Solution(grid, last.x), n, last.relative_residual, best_asm, best_solve, last.method};
    return run;
}

}  // namespace

ModelRun run_filtration_full(const FiltrationConfig& c) {
    const StaggeredGrid grid = build_grid(filtration_geometry(c, Model::Full), Model::Full);
    const BoundarySpec bcs = filtration_bcs().full;
    return timed_run(grid, c, [&] { return assemble_full(grid, c.params, {}, bcs); });
}

ModelRun run_filtration_reduced(const FiltrationConfig& c, const ClosureProfile& profile) {
    const StaggeredGrid grid = build_grid(filtration_geometry(c, Model::Reduced), Model::Reduced);
    const FiltrationBCs bcs = filtration_bcs();
    return timed_run(grid, c,
                     [&] { return assemble_reduced(grid, c.params, profile, {}, bcs.reduced, bcs.gamma); });
}

FiltrationReport run_filtration(const FiltrationConfig& c, const std::vector<ClosureProfile>& profiles) {
    ModelRun full = run_filtration_full(c);
    GammaAverages avg = average_full_across_transition(full.solution);
    FiltrationReport rep{c.h, std::move(full), std::move(avg), {}};
    for (const ClosureProfile& pr : profiles) {
        ModelRun red = run_filtration_reduced(c, pr);
        const Deviations dev = relative_deviations(rep.averages, gamma_unknowns(red.solution));
        rep.runs.push_back({pr, std::move(red), dev});
    }
    return rep;
}

void write_deviations_csv(const FiltrationReport& rep, std::ostream& os) {
    os << "profile,eps_u,eps_v,eps_p,cpu_full_s,cpu_reduced_s\n" << std::setprecision(17);
    for (const ProfileRun& r : rep.runs)
        os << to_string(r.profile.kind) << ',' << r.deviations.eps_u << ',' << r.deviations.eps_v << ','
           << r.deviations.eps_p << ',' << rep.full.cpu_total() << ',' << r.reduced.cpu_total() << '\n';
}

void write_profile_csv(const FiltrationReport& rep, std::ostream& os) {
    os << "x1,u_full,v_full,u_reduced_interp,v_reduced_interp,U_gamma,V_gamma\n" << std::setprecision(17);
    if (rep.runs.empty()) return;
    auto it = std::find_if(rep.runs.begin(), rep.runs.end(),
                           [](const ProfileRun& r) { return r.profile.kind == ProfileKind::Quadratic; });
    const ProfileRun& r = it == rep.runs.end() ? rep.runs.front() : *it;
    const double y = rep.full.solution.grid().geometry().y_gamma_ff;
    const LineProfile f = extract_profile(rep.full.solution, y);
    const LineProfile red = extract_profile(r.reduced.solution, y);
    const GammaAverages gam = gamma_unknowns(r.reduced.solution);
    for (std::size_t i = 0; i < f.x.size(); ++i)
        os << f.x[i] << ',' << f.u[i] << ',' << f.v[i] << ',' << red.u[i] << ',' << red.v[i] << ',' << gam.u[i]
           << ',' << gam.v[i] << '\n';
}

}  // namespace sbd
