#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sbd/assembly.hpp"
#include "sbd/solution.hpp"
#include "sbd/solver.hpp"
#include "sbd/verification.hpp"

using namespace sbd;

TEST_CASE("tangential closure matches a quadratic profile built from its defining conditions") {
    PhysicalParams p = mms_params();
    for (double d : {0.2, 5e-4}) {
        const double Vt = 1.3, uff = 0.7;
        // u(n) = a + b n + c n^2 on [0, d]: u(d) = uff, mean = Vt, u(0) = sqrt(K)/alpha u'(0)
        const double r = std::sqrt(p.K_pm_ref()) / p.alpha;
        Eigen::Matrix3d M;
        M << 1, d, d * d, 1, d / 2, d * d / 3, 1, -r, 0;
        const Eigen::Vector3d c = M.fullPivLu().solve(Eigen::Vector3d(uff, Vt, 0.0));
        const TangentialClosure tc = tangential_closure(p, d, Vt, uff);
        CHECK(tc.v_tau_at_pm == doctest::Approx(c[0]).epsilon(1e-9));
        CHECK(tc.dv_dn_tau_at_ff == doctest::Approx(c[1] + 2 * c[2] * d).epsilon(1e-9));
    }
}

TEST_CASE("quadratic normal closure is the parabola through both traces with the given mean") {
    const double d = 0.1, V = 0.4, a = 0.1 /* pm side */, b = 0.9 /* ff side */;
    const double c = 6.0 * (V - 0.5 * (a + b));  // v(t) = a + (b - a) t + c t (1 - t)
    const NormalClosure nc = normal_closure(ClosureProfile::quadratic(), d, V, b, a);
    CHECK(nc.dv_dn_at_ff == doctest::Approx((b - a - c) / d));
    CHECK(nc.dv_dn_at_pm == doctest::Approx((b - a + c) / d));
}

TEST_CASE("normal closure is mirror symmetric and exact for constants") {
    for (const ClosureProfile& pr :
         {ClosureProfile::linear(), ClosureProfile::piecewise_linear(), ClosureProfile::quadratic()}) {
        const double d = 0.05, V = 0.3, a = -0.2, b = 0.8;
        CHECK(normal_closure(pr, d, V, a, b).dv_dn_at_pm == -normal_closure(pr, d, V, b, a).dv_dn_at_ff);
        const NormalClosure flat = normal_closure(pr, d, 0.6, 0.6, 0.6);
        CHECK(flat.dv_dn_at_ff == doctest::Approx(0.0).scale(1.0));
        CHECK(flat.dv_dn_at_pm == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("reduced coefficients: golden values for the manufactured-solution setup") {
    const ReducedCoefficients c = reduced_coefficients(mms_params(), ClosureProfile::quadratic(), 5e-4);
    CHECK(c.normal_vff == doctest::Approx(6000.0).epsilon(1e-14));
    CHECK(c.normal_vn == doctest::Approx(6000.05).epsilon(1e-14));
    CHECK(c.normal_p == 1.5);
    CHECK(c.tangential_uff == doctest::Approx(6000.749906261717).epsilon(1e-14));
    CHECK(c.tangential_vt == doctest::Approx(6002.2997187851515).epsilon(1e-14));
    CHECK(c.traction_t_uff == doctest::Approx(6000.249968753906).epsilon(1e-14));
    CHECK(c.traction_t_vt == -c.tangential_uff);
    CHECK(c.friction == doctest::Approx(10.0));
    CHECK(c.normal_vt == 0.0);
    CHECK(c.tangential_vn == 0.0);
    CHECK_THROWS_AS(reduced_coefficients(mms_params(), ClosureProfile::quadratic(), 0.0), ValidationError);
}

TEST_CASE("isotropic transition permeability leaves no assembled cross coupling") {
    const double d = 5e-4;
    const GeometryConfig geo = mms_geometry(Model::Reduced, 10);
    for (bool aniso : {false, true}) {
        PhysicalParams p = mms_params();
        if (aniso) p.K_tr = {1e-2, 2e-3, 1e-2};
        MmsOptions opt;
        const MmsProblem pb = build_mms_problem(Model::Reduced, geo, p, opt);
        const DofMap dof(pb.grid);
        const SparseMatrix& A = pb.system.matrix();
        for (int i = 0; i < pb.grid.nx(); ++i) {
            const double nt = A.coeff(dof.gamma_vn(i), dof.gamma_vt(i));
            const double tn = A.coeff(dof.gamma_vt(i), dof.gamma_vn(i));
            if (aniso) {
                CHECK(nt == doctest::Approx(d * p.mu * m_projection(p.K_tr, {0, 1}, {1, 0})));
            } else {
                CHECK(nt == 0.0);
                CHECK(tn == 0.0);
            }
        }
    }
}

TEST_CASE("gradient and divergence blocks are negative transposes on a 4x4 grid") {
    const StaggeredGrid g = build_stokes_box(1.0, 1.0, 4, 4);
    BoundarySpec b;
    b.ff_left = b.ff_right = b.ff_top = b.stokes_bottom = StokesBC::no_slip();
    LinearSystem s = assemble_full(g, PhysicalParams{}, {}, b);
    const DofMap dof(g);
    const SparseMatrix& A = s.matrix();
    int compared = 0;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
            const std::size_t pc = dof.p(i, j);
            if (A.coeff(pc, pc) != 0.0) continue;  // the pinned pressure cell
            for (int k = 1; k < 4; ++k)
                for (int jj = 0; jj < 4; ++jj) {
                    CHECK(A.coeff(dof.u(k, jj), pc) == -A.coeff(pc, dof.u(k, jj)));
                    ++compared;
                }
            for (int jj = 1; jj < 4; ++jj)
                for (int k = 0; k < 4; ++k) {
                    CHECK(A.coeff(dof.v(k, jj), pc) == -A.coeff(pc, dof.v(k, jj)));
                    ++compared;
                }
        }
    CHECK(compared >= 15 * 24);
}

TEST_CASE("discrete divergence vanishes after a direct solve") {
    for (Model m : {Model::Full, Model::Reduced}) {
        MmsProblem pb = build_mms_problem(m, mms_geometry(m, 20), mms_params());
        const SolveReport r = solve(pb.system, SolveMethod::DirectLU, 1e-12);
        const Solution sol(pb.grid, r.x);
        CHECK(sol.max_abs_divergence() <= 1e-9);
    }
}

TEST_CASE("every row of both assemblies is set") {
    for (Model m : {Model::Full, Model::Reduced}) {
        const MmsProblem pb = build_mms_problem(m, mms_geometry(m, 10), mms_params());
        CHECK(pb.system.finalized());
        CHECK(pb.system.size() == dof_count(pb.grid));
    }
}

TEST_CASE("the reduced assembler refuses a full grid") {
    const StaggeredGrid g = build_grid(mms_geometry(Model::Full, 10), Model::Full);
    CHECK_THROWS_AS(assemble_reduced(g, mms_params(), ClosureProfile::quadratic(), {}, {}, {}), ValidationError);
}
