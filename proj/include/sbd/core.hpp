#pragma once

/**
 * @file core.hpp
 * @brief Physical parameters, permeability/friction tensors and closure
 *        profiles shared by the full and the reduced assemblies.
 *
 * Conventions used throughout the library: the interface is horizontal,
 * the tangential vector is tau = e1 and the normal vector n = e2 points from
 * the porous medium towards the free flow.
 */

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbd {

/// Thrown on invalid user input (parameters, geometry, configuration).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
    ValidationError(const std::string& what, std::vector<std::string> problems)
        : std::runtime_error(what), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

using Vec2 = std::array<double, 2>;

/// Symmetric 2x2 tensor [[xx, xy], [xy, yy]].
struct SymTensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    static SymTensor2 isotropic(double k) { return {k, 0.0, k}; }
    static SymTensor2 zero() { return {0.0, 0.0, 0.0}; }

    double det() const { return xx * yy - xy * xy; }
    bool is_spd() const { return xx > 0.0 && det() > 0.0; }
    bool is_psd() const { return xx >= 0.0 && yy >= 0.0 && det() >= 0.0; }
    bool is_diagonal() const { return xy == 0.0; }

    /// Induced infinity norm (maximum absolute row sum).
    double inf_norm() const;

    /// Closed-form inverse; throws ValidationError when singular.
    SymTensor2 inverse() const;

    Vec2 apply(const Vec2& v) const { return {xx * v[0] + xy * v[1], xy * v[0] + yy * v[1]}; }
    double quad(const Vec2& a, const Vec2& b) const;

    bool operator==(const SymTensor2&) const = default;
};

enum class ProfileKind { Linear, PiecewiseLinear, Quadratic, Custom };

/// Assumed shape of the normal velocity across the transition zone.
struct ClosureProfile {
    ProfileKind kind = ProfileKind::Quadratic;
    double lambda1 = 4.0;
    double lambda2 = 2.0;

    static ClosureProfile linear() { return {ProfileKind::Linear, 2.0, 0.0}; }
    static ClosureProfile piecewise_linear() { return {ProfileKind::PiecewiseLinear, 3.0, 1.0}; }
    static ClosureProfile quadratic() { return {ProfileKind::Quadratic, 4.0, 2.0}; }
    /// Validated custom pair.
    static ClosureProfile custom(double lambda1, double lambda2);

    bool operator==(const ClosureProfile&) const = default;
};

std::string to_string(ProfileKind kind);
/// Accepts "linear", "piecewise-linear" (or "piecewise_linear"), "quadratic".
ProfileKind parse_profile_kind(const std::string& name);

/// Returns (lambda1, lambda2) for a profile; Custom pairs are validated.
std::array<double, 2> closure_params(const ClosureProfile& profile);
inline std::array<double, 2> closure_params(ProfileKind kind) {
    switch (kind) {
    case ProfileKind::Linear: return closure_params(ClosureProfile::linear());
    case ProfileKind::PiecewiseLinear: return closure_params(ClosureProfile::piecewise_linear());
    case ProfileKind::Quadratic: return closure_params(ClosureProfile::quadratic());
    case ProfileKind::Custom: break;
    }
    throw ValidationError("closure_params: Custom profile needs explicit lambda values");
}

/// a^T K^{-1} b via the closed-form 2x2 inverse.
double m_projection(const SymTensor2& K, const Vec2& a, const Vec2& b);

struct PhysicalParams {
    double mu = 1.0;
    double mu_eff = 1.0;
    double alpha = 0.1;
    SymTensor2 beta = SymTensor2::zero();
    SymTensor2 K_tr = SymTensor2::isotropic(1e-2);
    SymTensor2 K_pm = SymTensor2::isotropic(1e-2);

    /// ||K_tr||_inf, the scalar permeability in the stress-jump friction term.
    double K_tr_ref() const { return K_tr.inf_norm(); }
    /// tau . K_pm . tau, the scalar permeability in the slip condition.
    double K_pm_ref() const { return K_pm.xx; }

    bool operator==(const PhysicalParams&) const = default;
};

/// Every violated condition, empty when the parameters are admissible.
std::vector<std::string> check_params(const PhysicalParams& p);
/// Throws ValidationError listing every violation.
void validate_params(const PhysicalParams& p);

}  // namespace sbd
