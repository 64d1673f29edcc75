#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sbd/verification.hpp"

using namespace sbd;

namespace {

struct Point {
    double x, y;
};

std::vector<Point> random_points(double y_lo, double y_hi, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> X(0.05, 0.95), Y(y_lo, y_hi);
    std::vector<Point> pts;
    for (int k = 0; k < 20; ++k) pts.push_back({X(rng), Y(rng)});
    return pts;
}

constexpr double kTol = 1e-8;

// Anisotropic tensors exercise the cross terms the isotropic setup hides.
PhysicalParams aniso_params() {
    PhysicalParams p;
    p.mu = 1.3;
    p.mu_eff = 0.7;
    p.K_tr = {2e-2, 4e-3, 1e-2};
    p.K_pm = {1e-2, -3e-3, 2e-2};
    return p;
}

}  // namespace

TEST_CASE("exact-field derivatives match finite differences") {
    const MmsExact ex(0.9);
    for (const Point& q : random_points(0.0, 2.0, 1)) {
        auto in_x = [&](double (MmsExact::*f)(double, double) const) {
            return oracle::d1([&](double t) { return (ex.*f)(t, q.y); }, q.x);
        };
        auto in_y = [&](double (MmsExact::*f)(double, double) const) {
            return oracle::d1([&](double t) { return (ex.*f)(q.x, t); }, q.y);
        };
        CHECK(std::abs(ex.u_x(q.x, q.y) - in_x(&MmsExact::u)) <= kTol);
        CHECK(std::abs(ex.u_y(q.x, q.y) - in_y(&MmsExact::u)) <= kTol);
        CHECK(std::abs(ex.v_x(q.x, q.y) - in_x(&MmsExact::v)) <= kTol);
        CHECK(std::abs(ex.v_y(q.x, q.y) - in_y(&MmsExact::v)) <= kTol);
        CHECK(std::abs(ex.p_x(q.x, q.y) - in_x(&MmsExact::p)) <= kTol);
        CHECK(std::abs(ex.p_y(q.x, q.y) - in_y(&MmsExact::p)) <= kTol);
        CHECK(std::abs(ex.p_pm_x(q.x, q.y) - in_x(&MmsExact::p_pm)) <= kTol);
        CHECK(std::abs(ex.p_pm_y(q.x, q.y) - in_y(&MmsExact::p_pm)) <= kTol);
    }
}

TEST_CASE("full-model sources match finite-difference residuals of the exact solution") {
    for (const PhysicalParams& prm : {mms_params(), aniso_params()}) {
        const double y0 = 0.9;
        const MmsExact ex(y0);
        const SourceFieldsFull src = mms_sources_full(prm, y0);
        const SymTensor2 Ki = prm.K_tr.inverse();
        for (const Point& q : random_points(0.0, 2.0, 2)) {
            auto lap = [&](double (MmsExact::*f)(double, double) const) {
                return oracle::d2([&](double t) { return (ex.*f)(t, q.y); }, q.x) +
                       oracle::d2([&](double t) { return (ex.*f)(q.x, t); }, q.y);
            };
            const double px = oracle::d1([&](double t) { return ex.p(t, q.y); }, q.x);
            const double py = oracle::d1([&](double t) { return ex.p(q.x, t); }, q.y);
            const Vec2 ff = src.f_ff(q.x, q.y);
            // the ff source is evaluated with mu; the exact velocity is harmonic
            CHECK(std::abs(ff[0] - (-prm.mu * lap(&MmsExact::u) + px)) <= kTol);
            CHECK(std::abs(ff[1] - (-prm.mu * lap(&MmsExact::v) + py)) <= kTol);
            const Vec2 drag = Ki.apply({ex.u(q.x, q.y), ex.v(q.x, q.y)});
            const Vec2 tr = src.f_tr(q.x, q.y);
            CHECK(std::abs(tr[0] - (prm.mu * drag[0] - prm.mu_eff * lap(&MmsExact::u) + px)) <= kTol);
            CHECK(std::abs(tr[1] - (prm.mu * drag[1] - prm.mu_eff * lap(&MmsExact::v) + py)) <= kTol);

            // q = div v_pm with v_pm = -K grad p_pm / mu
            const SymTensor2& K = prm.K_pm;
            auto flux = [&](double x, double y, int c) {
                const double gx = oracle::d1([&](double t) { return ex.p_pm(t, y); }, x);
                const double gy = oracle::d1([&](double t) { return ex.p_pm(x, t); }, y);
                const Vec2 r = K.apply({gx, gy});
                return -r[c] / prm.mu;
            };
            const double div = oracle::d1([&](double t) { return flux(t, q.y, 0); }, q.x) +
                               oracle::d1([&](double t) { return flux(q.x, t, 1); }, q.y);
            CHECK(std::abs(src.q(q.x, q.y) - div) <= kTol);
        }
    }
}

TEST_CASE("interface averages match Simpson quadrature across the strip") {
    const double y0 = 0.5;
    const MmsExact ex(y0);
    for (double d : {5e-4, 0.2}) {
        for (const Point& q : random_points(0.0, 1.0, 3)) {
            const double s = q.x;
            CHECK(std::abs(ex.U(s, d) - oracle::mean([&](double y) { return ex.u(s, y); }, y0, y0 + d)) <= 1e-10);
            CHECK(std::abs(ex.V(s, d) - oracle::mean([&](double y) { return ex.v(s, y); }, y0, y0 + d)) <= 1e-10);
            CHECK(std::abs(ex.P(s, d) - oracle::mean([&](double y) { return ex.p(s, y); }, y0, y0 + d)) <= 1e-10);
            auto dU = [&](double (MmsExact::*f)(double, double) const) {
                return oracle::d1([&](double t) { return (ex.*f)(t, d); }, s);
            };
            CHECK(std::abs(ex.U_s(s, d) - dU(&MmsExact::U)) <= kTol);
            CHECK(std::abs(ex.V_s(s, d) - dU(&MmsExact::V)) <= kTol);
            CHECK(std::abs(ex.P_s(s, d) - dU(&MmsExact::P)) <= kTol);
            CHECK(std::abs(ex.U_ss(s, d) - oracle::d2([&](double t) { return ex.U(t, d); }, s)) <= kTol);
            CHECK(std::abs(ex.V_ss(s, d) - oracle::d2([&](double t) { return ex.V(t, d); }, s)) <= kTol);
        }
    }
}

TEST_CASE("reduced sources are strip averages of the transition-zone source") {
    for (const PhysicalParams& prm : {mms_params(), aniso_params()}) {
        const double y0 = 0.5, d = 0.05;
        const SourceFieldsFull full = mms_sources_full(prm, y0);
        const SourceFieldsReduced red = mms_sources_reduced(prm, ClosureProfile::quadratic(), y0, d);
        for (const Point& q : random_points(0.0, 1.0, 4)) {
            const double Ft = oracle::mean([&](double y) { return full.f_tr(q.x, y)[0]; }, y0, y0 + d);
            const double Fn = oracle::mean([&](double y) { return full.f_tr(q.x, y)[1]; }, y0, y0 + d);
            CHECK(std::abs(red.F_tau(q.x) - Ft) <= 1e-10);
            CHECK(std::abs(red.F_n(q.x) - Fn) <= 1e-10);
        }
    }
}

TEST_CASE("the manufactured solution satisfies every interface condition") {
    // stress T(v, p) = mu grad v - p I; gamma_pm normal points into the porous medium
    const PhysicalParams prm = mms_params();
    const double y0 = 0.9, yf = 1.1;
    const MmsExact ex(y0);
    for (double x : {0.0, 0.137, 0.5, 0.77, 1.0}) {
        // gamma_ff: velocity continuity and stress jump (beta = 0)
        const Vec2 Tff{prm.mu * ex.u_y(x, yf), prm.mu * ex.v_y(x, yf) - ex.p(x, yf)};
        const Vec2 Ttr{prm.mu_eff * ex.u_y(x, yf), prm.mu_eff * ex.v_y(x, yf) - ex.p(x, yf)};
        const Vec2 jump{prm.beta.xx * ex.u(x, yf) + prm.beta.xy * ex.v(x, yf),
                        prm.beta.xy * ex.u(x, yf) + prm.beta.yy * ex.v(x, yf)};
        const double fr = prm.mu / std::sqrt(prm.K_tr_ref());
        CHECK(std::abs(Tff[0] - Ttr[0] - fr * jump[0]) <= 1e-10);
        CHECK(std::abs(Tff[1] - Ttr[1] - fr * jump[1]) <= 1e-10);

        // gamma_pm, n = -e2: normal flux continuity with v_pm = -K grad p_pm / mu
        const Vec2 g{ex.p_pm_x(x, y0), ex.p_pm_y(x, y0)};
        const Vec2 vpm = prm.K_pm.apply(g);
        CHECK(std::abs(-ex.v(x, y0) - (vpm[1] / prm.mu)) <= 1e-10);
        // balance of normal forces: -n.T_eff.n = p_pm
        const double nTn = prm.mu_eff * ex.v_y(x, y0) - ex.p(x, y0);
        CHECK(std::abs(-nTn - ex.p_pm(x, y0)) <= 1e-10);
        // slip condition: u = -(sqrt(K_pm)/alpha) du/dn with d/dn = -d/dy
        CHECK(std::abs(ex.u(x, y0) - std::sqrt(prm.K_pm_ref()) / prm.alpha * ex.u_y(x, y0)) <= 1e-10);
    }
}
