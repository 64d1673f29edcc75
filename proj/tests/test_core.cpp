#include <doctest.h>

#include <cmath>
#include <random>

#include "sbd/core.hpp"

using namespace sbd;

TEST_CASE("closure_params returns the tabulated profile constants") {
    CHECK(closure_params(ProfileKind::Linear) == std::array<double, 2>{2.0, 0.0});
    CHECK(closure_params(ProfileKind::PiecewiseLinear) == std::array<double, 2>{3.0, 1.0});
    CHECK(closure_params(ProfileKind::Quadratic) == std::array<double, 2>{4.0, 2.0});
    CHECK(closure_params(ClosureProfile::custom(5.0, 0.5)) == std::array<double, 2>{5.0, 0.5});
}

TEST_CASE("closure profiles reject lambda1 <= lambda2 and negative lambda2") {
    CHECK_THROWS_AS(ClosureProfile::custom(2.0, 2.0), ValidationError);
    CHECK_THROWS_AS(ClosureProfile::custom(1.0, 2.0), ValidationError);
    CHECK_THROWS_AS(ClosureProfile::custom(2.0, -0.1), ValidationError);
    CHECK_THROWS_AS(closure_params(ProfileKind::Custom), ValidationError);
}

TEST_CASE("profile names parse and print") {
    for (ProfileKind k : {ProfileKind::Linear, ProfileKind::PiecewiseLinear, ProfileKind::Quadratic})
        CHECK(parse_profile_kind(to_string(k)) == k);
    CHECK(parse_profile_kind("piecewise_linear") == ProfileKind::PiecewiseLinear);
    CHECK_THROWS_AS(parse_profile_kind("cubic"), ValidationError);
}

TEST_CASE("m_projection is symmetric and positive for SPD tensors") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double a = 0.1 + std::abs(U(rng)), c = 0.1 + std::abs(U(rng));
        const double b = 0.9 * std::sqrt(a * c) * U(rng);
        const SymTensor2 K{a, b, c};
        REQUIRE(K.is_spd());
        const Vec2 x{U(rng), U(rng)}, y{U(rng), U(rng)};
        CHECK(m_projection(K, x, y) == doctest::Approx(m_projection(K, y, x)).epsilon(1e-13));
        const double t = U(rng) * M_PI;
        const Vec2 e{std::cos(t), std::sin(t)};
        CHECK(m_projection(K, e, e) > 0.0);
    }
}

TEST_CASE("isotropic tensors have no normal-tangential coupling") {
    const SymTensor2 K = SymTensor2::isotropic(1e-3);
    CHECK(m_projection(K, {1.0, 0.0}, {0.0, 1.0}) == 0.0);
    CHECK(m_projection(K, {1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1e3));
}

TEST_CASE("m_projection matches an explicit inverse") {
    const SymTensor2 K{2.0, 0.5, 1.0};
    // K^{-1} = [[1, -0.5], [-0.5, 2]] / 1.75
    CHECK(m_projection(K, {1, 0}, {0, 1}) == doctest::Approx(-0.5 / 1.75));
    CHECK(m_projection(K, {0, 1}, {0, 1}) == doctest::Approx(2.0 / 1.75));
    CHECK_THROWS_AS(m_projection(SymTensor2{1.0, 2.0, 1.0}, {1, 0}, {1, 0}), ValidationError);
}

TEST_CASE("m_projection worked examples") {
    CHECK(m_projection(SymTensor2{2.0, 1.0, 2.0}, {1, 0}, {0, 1}) == doctest::Approx(-1.0 / 3.0));
    const Vec2 n{0.0, 1.0};
    CHECK(m_projection(SymTensor2::isotropic(1e-2), n, n) == doctest::Approx(100.0));
}

TEST_CASE("the reference permeability uses the induced infinity norm") {
    PhysicalParams p;
    p.K_tr = {1.0, -0.5, 3.0};
    CHECK(p.K_tr_ref() == 3.5);
    p.K_tr = SymTensor2::isotropic(0.25);
    CHECK(p.K_tr_ref() == 0.25);
}

TEST_CASE("parameter validation rejects the documented bad inputs") {
    PhysicalParams ok;
    CHECK(check_params(ok).empty());
    CHECK_NOTHROW(validate_params(ok));

    PhysicalParams bad_ktr = ok;
    bad_ktr.K_tr = {1.0, 2.0, 1.0};  // indefinite
    CHECK_THROWS_WITH_AS(validate_params(bad_ktr), doctest::Contains("K_tr not SPD"), ValidationError);

    PhysicalParams bad_kpm = ok;
    bad_kpm.K_pm = {0.0, 0.0, 1.0};  // singular
    CHECK_THROWS_WITH_AS(validate_params(bad_kpm), doctest::Contains("K_pm not SPD"), ValidationError);

    PhysicalParams bad_beta = ok;
    bad_beta.beta = {-1.0, 0.0, 0.0};
    CHECK_THROWS_WITH_AS(validate_params(bad_beta), doctest::Contains("beta not PSD"), ValidationError);
    bad_beta.beta = {1.0, 0.0, -1.0};
    CHECK_THROWS_WITH_AS(validate_params(bad_beta), doctest::Contains("beta not PSD"), ValidationError);

    PhysicalParams many = ok;
    many.mu = 0.0;
    many.alpha = -1.0;
    try {
        validate_params(many);
        FAIL("no exception");
    } catch (const ValidationError& e) {
        CHECK(e.problems().size() == 2);
    }
}

TEST_CASE("positive semi-definite friction tensors are accepted") {
    PhysicalParams p;
    p.beta = {1.0, 1.0, 1.0};
    CHECK(check_params(p).empty());
}

TEST_CASE("singular tensors cannot be inverted") {
    CHECK_THROWS_AS(SymTensor2::zero().inverse(), ValidationError);
}
