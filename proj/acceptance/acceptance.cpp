// Acceptance checks: one PASS/FAIL line per criterion.
//
//   acceptance [--skip-large] [--strict] [--report FILE]
//
// --skip-large skips the h = 1/800 filtration runs (criteria 3 and the
// 1/800 half of 5 report SKIP). --strict turns any FAIL into exit code 1;
// without it the exit code only reports whether every check could run.
// The lines are also written to FILE (default acceptance_report.txt).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "sbd/assembly.hpp"
#include "sbd/scenarios.hpp"
#include "sbd/solution.hpp"
#include "sbd/verification.hpp"

using namespace sbd;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
    Status status;
    std::string detail;
};

std::string num(double v, int prec = 4) {
    char b[40];
    std::snprintf(b, sizeof b, "%.*g", prec, v);
    return b;
}

double wall_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }

// ------------------------------------------------------------ MMS studies

Outcome convergence_criterion(Model model, const std::vector<int>& nxs, const MmsOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<GeometryConfig> grids;
    for (int n : nxs) grids.push_back(mms_geometry(model, n));
    const ConvergenceReport rep = convergence_study(model, grids, mms_params(), opt);
    const double secs = wall_since(t0);
    bool ok = secs < 120.0;
    std::ostringstream os;
    os << "grids " << grids.front().nx << "x" << grids.front().ny << " -> " << grids.back().nx << "x"
       << grids.back().ny << "; orders";
    for (const auto& [f, o] : rep.orders) {
        os << ' ' << to_string(f) << '=';
        for (std::size_t k = 0; k < o.pairwise.size(); ++k) {
            os << (k ? "/" : "") << num(o.pairwise[k], 3);
            ok = ok && in_band(o.pairwise[k], 1.7, 2.3);
        }
        ok = ok && !o.undefined && in_band(o.slope, 1.7, 2.3);
    }
    os << "; " << num(secs, 3) << " s";
    return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome consistency_criterion() {
    std::ostringstream os;
    bool ok = true;
    for (Model m : {Model::Full, Model::Reduced}) {
        std::vector<GeometryConfig> grids;
        for (int n : {20, 40, 80, 160}) grids.push_back(mms_geometry(m, n));
        MmsOptions opt;
        opt.closure_defect = true;  // lets the reduced exact fields satisfy the closure exactly
        const ConsistencyReport r = consistency_study(m, grids, mms_params(), opt);
        os << (m == Model::Full ? "full" : "; reduced") << " rates";
        for (double q : r.orders.pairwise) {
            os << ' ' << num(q, 4);
            ok = ok && q >= 2.0;
        }
        os << " (slope " << num(r.orders.slope, 4) << ")";
        ok = ok && r.orders.slope >= 2.0;
    }
    return {ok ? Status::Pass : Status::Fail, os.str()};
}

// ---------------------------------------------------------------- oracles

Outcome oracle_criterion() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> X(0.05, 0.95), Y(0.05, 1.95);
    double worst_fd = 0.0, worst_quad = 0.0, worst_ic = 0.0;
    auto track = [](double& w, double a, double b) { w = std::max(w, std::abs(a - b)); };

    const PhysicalParams prm = mms_params();
    const double y0 = 0.9;
    const MmsExact ex(y0);
    const SourceFieldsFull src = mms_sources_full(prm, y0);
    const SymTensor2 Ki = prm.K_tr.inverse();
    for (int k = 0; k < 20; ++k) {
        const double x = X(rng), y = Y(rng);
        auto fx = [&](double (MmsExact::*f)(double, double) const) {
            return std::function<double(double)>([&ex, f, y](double t) { return (ex.*f)(t, y); });
        };
        auto fy = [&](double (MmsExact::*f)(double, double) const) {
            return std::function<double(double)>([&ex, f, x](double t) { return (ex.*f)(x, t); });
        };
        const double lap_u = oracle::d2(fx(&MmsExact::u), x) + oracle::d2(fy(&MmsExact::u), y);
        const double lap_v = oracle::d2(fx(&MmsExact::v), x) + oracle::d2(fy(&MmsExact::v), y);
        const double px = oracle::d1(fx(&MmsExact::p), x), py = oracle::d1(fy(&MmsExact::p), y);
        track(worst_fd, src.f_ff(x, y)[0], -prm.mu * lap_u + px);
        track(worst_fd, src.f_ff(x, y)[1], -prm.mu * lap_v + py);
        const Vec2 drag = Ki.apply({ex.u(x, y), ex.v(x, y)});
        track(worst_fd, src.f_tr(x, y)[0], prm.mu * drag[0] - prm.mu_eff * lap_u + px);
        track(worst_fd, src.f_tr(x, y)[1], prm.mu * drag[1] - prm.mu_eff * lap_v + py);
        auto flux = [&](double xx, double yy, int c) {
            const double gx = oracle::d1([&](double t) { return ex.p_pm(t, yy); }, xx);
            const double gy = oracle::d1([&](double t) { return ex.p_pm(xx, t); }, yy);
            return -prm.K_pm.apply({gx, gy})[c] / prm.mu;
        };
        const double q = oracle::d1([&](double t) { return flux(t, y, 0); }, x) +
                         oracle::d1([&](double t) { return flux(x, t, 1); }, y);
        track(worst_fd, src.q(x, y), q);
        track(worst_fd, ex.u_x(x, y), oracle::d1(fx(&MmsExact::u), x));
        track(worst_fd, ex.v_y(x, y), oracle::d1(fy(&MmsExact::v), y));
        track(worst_fd, ex.p_pm_y(x, y), oracle::d1(fy(&MmsExact::p_pm), y));
    }

    for (double d : {kMmsReducedThickness, 0.2}) {
        const double yr = 0.5;
        const MmsExact er(yr);
        const SourceFieldsFull fr = mms_sources_full(prm, yr);
        const SourceFieldsReduced sr = mms_sources_reduced(prm, ClosureProfile::quadratic(), yr, d);
        for (int k = 0; k < 20; ++k) {
            const double s = X(rng);
            track(worst_quad, er.U(s, d), oracle::mean([&](double y) { return er.u(s, y); }, yr, yr + d));
            track(worst_quad, er.V(s, d), oracle::mean([&](double y) { return er.v(s, y); }, yr, yr + d));
            track(worst_quad, er.P(s, d), oracle::mean([&](double y) { return er.p(s, y); }, yr, yr + d));
            track(worst_quad, sr.F_tau(s), oracle::mean([&](double y) { return fr.f_tr(s, y)[0]; }, yr, yr + d));
            track(worst_quad, sr.F_n(s), oracle::mean([&](double y) { return fr.f_tr(s, y)[1]; }, yr, yr + d));
            track(worst_fd, er.U_s(s, d), oracle::d1([&](double t) { return er.U(t, d); }, s));
            track(worst_fd, er.V_ss(s, d), oracle::d2([&](double t) { return er.V(t, d); }, s));
            track(worst_fd, er.P_s(s, d), oracle::d1([&](double t) { return er.P(t, d); }, s));
        }
    }

    const double yf = 1.1;
    for (int k = 0; k <= 20; ++k) {
        const double x = k / 20.0;
        // gamma_ff: continuity holds by construction; stress jump with beta = 0
        track(worst_ic, prm.mu * ex.u_y(x, yf) - prm.mu_eff * ex.u_y(x, yf), 0.0);
        track(worst_ic, (prm.mu * ex.v_y(x, yf) - ex.p(x, yf)) - (prm.mu_eff * ex.v_y(x, yf) - ex.p(x, yf)), 0.0);
        // gamma_pm: normal flux, normal force balance, slip
        const Vec2 vpm = prm.K_pm.apply({ex.p_pm_x(x, y0), ex.p_pm_y(x, y0)});
        track(worst_ic, ex.v(x, y0), -vpm[1] / prm.mu);
        track(worst_ic, -(prm.mu_eff * ex.v_y(x, y0) - ex.p(x, y0)), ex.p_pm(x, y0));
        track(worst_ic, ex.u(x, y0), std::sqrt(prm.K_pm_ref()) / prm.alpha * ex.u_y(x, y0));
    }

    const bool ok = worst_fd <= 1e-8 && worst_quad <= 1e-8 && worst_ic <= 1e-10;
    return {ok ? Status::Pass : Status::Fail, "max |formula - FD| " + num(worst_fd, 3) + ", |formula - quadrature| " +
                                                  num(worst_quad, 3) + ", interface residual " + num(worst_ic, 3)};
}

// ------------------------------------------------------------- structure

Outcome structural_criterion(const std::map<int, FiltrationReport>& filtration) {
    std::ostringstream os;
    bool ok = true;

    double div = 0.0;
    for (Model m : {Model::Full, Model::Reduced}) {
        MmsProblem pb = build_mms_problem(m, mms_geometry(m, 40), mms_params());
        const SolveReport r = solve(pb.system, SolveMethod::DirectLU, 1e-10);
        div = std::max(div, Solution(pb.grid, r.x).max_abs_divergence());
    }
    for (const auto& [h, rep] : filtration) {
        div = std::max(div, rep.full.solution.max_abs_divergence());
        for (const ProfileRun& r : rep.runs) div = std::max(div, r.reduced.solution.max_abs_divergence());
    }
    ok = ok && div <= 1e-9;
    os << "max |div| " << num(div, 3);

    const StaggeredGrid g = build_stokes_box(1.0, 1.0, 4, 4);
    BoundarySpec b;
    b.ff_left = b.ff_right = b.ff_top = b.stokes_bottom = StokesBC::no_slip();
    LinearSystem s = assemble_full(g, PhysicalParams{}, {}, b);
    const DofMap dof(g);
    const SparseMatrix& A = s.matrix();
    double skew = 0.0;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
            const std::size_t pc = dof.p(i, j);
            if (A.coeff(pc, pc) != 0.0) continue;
            for (int k = 1; k < 4; ++k)
                for (int jj = 0; jj < 4; ++jj)
                    skew = std::max(skew, std::abs(A.coeff(dof.u(k, jj), pc) + A.coeff(pc, dof.u(k, jj))));
            for (int jj = 1; jj < 4; ++jj)
                for (int k = 0; k < 4; ++k)
                    skew = std::max(skew, std::abs(A.coeff(dof.v(k, jj), pc) + A.coeff(pc, dof.v(k, jj))));
        }
    ok = ok && skew == 0.0;
    os << "; |G + B^T| " << num(skew, 3);

    int rejected = 0;
    auto rejects = [](const PhysicalParams& p, const std::string& msg) {
        try {
            validate_params(p);
        } catch (const ValidationError& e) {
            return std::string(e.what()).find(msg) != std::string::npos;
        }
        return false;
    };
    PhysicalParams bad_k = mms_params();
    bad_k.K_tr = {1.0, 2.0, 1.0};
    rejected += rejects(bad_k, "K_tr not SPD");
    PhysicalParams bad_beta = mms_params();
    bad_beta.beta = {1.0, 0.0, -1.0};
    rejected += rejects(bad_beta, "beta not PSD");
    try {
        ClosureProfile::custom(1.0, 2.0);
    } catch (const ValidationError&) {
        ++rejected;
    }
    ok = ok && rejected == 3;
    os << "; bad inputs rejected " << rejected << "/3";

    const bool table = closure_params(ProfileKind::Linear) == std::array<double, 2>{2, 0} &&
                       closure_params(ProfileKind::PiecewiseLinear) == std::array<double, 2>{3, 1} &&
                       closure_params(ProfileKind::Quadratic) == std::array<double, 2>{4, 2};
    ok = ok && table;
    os << "; closure table " << (table ? "exact" : "MISMATCH");
    return {ok ? Status::Pass : Status::Fail, os.str()};
}

// ------------------------------------------------------------- filtration

struct Reference {
    ProfileKind kind;
    double u, v, p;
};

const std::vector<Reference>& table2() {
    static const std::vector<Reference> t{{ProfileKind::Linear, 8.0680e-2, 3.1463e-2, 1.3016e-1},
                                          {ProfileKind::PiecewiseLinear, 3.5585e-2, 2.2407e-2, 9.1480e-2},
                                          {ProfileKind::Quadratic, 2.8920e-2, 1.8101e-2, 7.1120e-2}};
    return t;
}

const ProfileRun& run_of(const FiltrationReport& rep, ProfileKind k) {
    for (const ProfileRun& r : rep.runs)
        if (r.profile.kind == k) return r;
    throw std::logic_error("missing profile run");
}

FiltrationReport filtration_at(int inv_h, int repeats) {
    FiltrationConfig c;
    c.h = 1.0 / inv_h;
    c.solver.method = SolveMethod::DirectLU;
    c.timing_repeats = repeats;
    return run_filtration(c, {ClosureProfile::quadratic(), ClosureProfile::piecewise_linear(), ClosureProfile::linear()});
}

std::string deviation_row(const FiltrationReport& rep, const Reference& ref) {
    const Deviations& d = run_of(rep, ref.kind).deviations;
    return to_string(ref.kind) + " (" + num(d.eps_u) + ", " + num(d.eps_v) + ", " + num(d.eps_p) + ")";
}

Outcome table2_full_resolution(const FiltrationReport& rep) {
    bool ok = true;
    std::ostringstream os;
    os << "h=1/800:";
    for (const Reference& ref : table2()) {
        const Deviations& d = run_of(rep, ref.kind).deviations;
        for (auto [got, want] : {std::pair{d.eps_u, ref.u}, {d.eps_v, ref.v}, {d.eps_p, ref.p}})
            ok = ok && std::abs(got / want - 1.0) <= 0.05;
        os << ' ' << to_string(ref.kind) << " ratio (" << num(d.eps_u / ref.u, 3) << ", " << num(d.eps_v / ref.v, 3)
           << ", " << num(d.eps_p / ref.p, 3) << ")";
    }
    return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome table2_desk_scale(const std::map<int, FiltrationReport>& runs) {
    bool ok = true;
    std::ostringstream os;
    for (int h : {200, 400}) {
        const FiltrationReport& rep = runs.at(h);
        const Deviations q = run_of(rep, ProfileKind::Quadratic).deviations;
        const Deviations pl = run_of(rep, ProfileKind::PiecewiseLinear).deviations;
        const Deviations l = run_of(rep, ProfileKind::Linear).deviations;
        const bool order = q.eps_u < pl.eps_u && pl.eps_u < l.eps_u && q.eps_v < pl.eps_v && pl.eps_v < l.eps_v &&
                           q.eps_p < pl.eps_p && pl.eps_p < l.eps_p;
        double worst = 1.0;
        for (const Reference& ref : table2()) {
            const Deviations& d = run_of(rep, ref.kind).deviations;
            for (auto [got, want] : {std::pair{d.eps_u, ref.u}, {d.eps_v, ref.v}, {d.eps_p, ref.p}})
                worst = std::max({worst, got / want, want / got});
        }
        ok = ok && order && worst <= 3.0;
        os << (h == 200 ? "" : "; ") << "h=1/" << h << " ordering " << (order ? "ok" : "VIOLATED")
           << ", worst factor " << num(worst, 3) << " [";
        for (const Reference& ref : table2()) os << (ref.kind == ProfileKind::Linear ? "" : ", ") << deviation_row(rep, ref);
        os << "]";
    }
    return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome cpu_criterion(const std::map<int, FiltrationReport>& runs, bool skipped_large) {
    bool ok = true;
    std::ostringstream os;
    for (int h : {400, 800}) {
        auto it = runs.find(h);
        if (it == runs.end()) {
            os << "; h=1/" << h << " skipped";
            continue;
        }
        const double full = it->second.full.cpu_total();
        const double red = run_of(it->second, ProfileKind::Quadratic).reduced.cpu_total();
        ok = ok && red < full;
        os << (h == 400 ? "" : "; ") << "h=1/" << h << " full " << num(full, 4) << " s, reduced " << num(red, 4)
           << " s (" << num(100.0 * (full - red) / full, 3) << "% saved)";
    }
    if (skipped_large && ok) return {Status::Skip, os.str()};
    return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome mass_criterion(const FiltrationReport& rep) {
    const double full = filtration_mass_imbalance(rep.full.solution);
    double red = 0.0;
    for (const ProfileRun& r : rep.runs) red = std::max(red, filtration_mass_imbalance(r.reduced.solution));
    const bool ok = full <= 5e-3 && red <= 5e-3;
    return {ok ? Status::Pass : Status::Fail,
            "h=1/200 |out - in|/in: full " + num(full, 3) + ", reduced (worst profile) " + num(red, 3)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    bool skip_large = false, strict = false;
    app.add_flag("--skip-large", skip_large, "skip the h = 1/800 filtration runs");
    app.add_flag("--strict", strict, "exit with status 1 when any criterion fails");
    std::string report_path = "acceptance_report.txt";
    app.add_option("--report", report_path, "file receiving a copy of the result lines");
    CLI11_PARSE(app, argc, argv);
    std::ostringstream log;

    std::map<int, Outcome> results;
    auto report = [&](int id, const std::string& title, const std::function<Outcome()>& f) {
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {Status::Fail, std::string("error: ") + e.what()};
        }
        const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
        std::ostringstream line;
        line << "criterion " << id << ": " << tag << "  " << title << " -- " << o.detail << '\n';
        std::cout << line.str() << std::flush;
        log << line.str();
        results[id] = o;
    };

    report(1, "full-model manufactured-solution convergence", [] {
        return convergence_criterion(Model::Full, {10, 20, 40, 80}, {});
    });
    report(2, "reduced-model manufactured-solution convergence", [] {
        return convergence_criterion(Model::Reduced, {80, 160, 320}, {});
    });

    std::map<int, FiltrationReport> filtration;
    std::string filtration_error;
    try {
        filtration.emplace(200, filtration_at(200, 1));
        filtration.emplace(400, filtration_at(400, 2));
        if (!skip_large) filtration.emplace(800, filtration_at(800, 1));
    } catch (const std::exception& e) {
        filtration_error = e.what();
    }
    auto need = [&](int h) -> const FiltrationReport& {
        if (!filtration_error.empty()) throw std::runtime_error(filtration_error);
        return filtration.at(h);
    };

    report(3, "filtration deviations at h=1/800 within 5% of the reference table", [&]() -> Outcome {
        if (skip_large) return {Status::Skip, "--skip-large"};
        return table2_full_resolution(need(800));
    });
    report(4, "filtration ordering and factor-3 agreement at h=1/200 and 1/400", [&] {
        need(200), need(400);
        return table2_desk_scale(filtration);
    });
    report(5, "reduced model cheaper than the full model", [&] {
        need(400);
        return cpu_criterion(filtration, skip_large);
    });
    report(6, "consistency residual of the exact solution decays at rate >= 2", [] { return consistency_criterion(); });
    report(7, "source, average and interface formulas against numerical oracles", [] { return oracle_criterion(); });
    report(8, "structural invariants", [&] {
        need(200);
        return structural_criterion(filtration);
    });
    report(9, "global mass balance in filtration", [&] { return mass_criterion(need(200)); });

    int pass = 0, fail = 0, skip = 0;
    for (const auto& [id, o] : results) (o.status == Status::Pass ? pass : o.status == Status::Fail ? fail : skip)++;
    const std::string summary = "summary: " + std::to_string(pass) + " passed, " + std::to_string(fail) + " failed, " +
                                std::to_string(skip) + " skipped\n";
    std::cout << summary << std::flush;
    log << summary;
    if (std::ofstream f(report_path); f) f << log.str();
    else std::cerr << "cannot write " << report_path << '\n';
    const bool errored = !filtration_error.empty();
    if (errored) return 2;
    return strict && fail > 0 ? 1 : 0;
}
