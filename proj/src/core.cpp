#include "sbd/core.hpp"

#include <algorithm>
#include <cmath>

namespace sbd {

double SymTensor2::inf_norm() const {
    return std::max(std::abs(xx) + std::abs(xy), std::abs(xy) + std::abs(yy));
}

SymTensor2 SymTensor2::inverse() const {
    const double D = det();
    if (D == 0.0 || !std::isfinite(D)) throw ValidationError("tensor is singular");
    return {yy / D, -xy / D, xx / D};
}

double SymTensor2::quad(const Vec2& a, const Vec2& b) const {
    const Vec2 Kb = apply(b);
    return a[0] * Kb[0] + a[1] * Kb[1];
}

ClosureProfile ClosureProfile::custom(double lambda1, double lambda2) {
    ClosureProfile p{ProfileKind::Custom, lambda1, lambda2};
    closure_params(p);
    return p;
}

std::string to_string(ProfileKind kind) {
    switch (kind) {
    case ProfileKind::Linear: return "linear";
    case ProfileKind::PiecewiseLinear: return "piecewise-linear";
    case ProfileKind::Quadratic: return "quadratic";
    case ProfileKind::Custom: return "custom";
    }
    return "unknown";
}

ProfileKind parse_profile_kind(const std::string& name) {
    if (name == "linear") return ProfileKind::Linear;
    if (name == "piecewise-linear" || name == "piecewise_linear") return ProfileKind::PiecewiseLinear;
    if (name == "quadratic") return ProfileKind::Quadratic;
    if (name == "custom") return ProfileKind::Custom;
    throw ValidationError("unknown closure profile '" + name + "'");
}

std::array<double, 2> closure_params(const ClosureProfile& profile) {
    switch (profile.kind) {
    case ProfileKind::Linear: return {2.0, 0.0};
    case ProfileKind::PiecewiseLinear: return {3.0, 1.0};
    case ProfileKind::Quadratic: return {4.0, 2.0};
    case ProfileKind::Custom: break;
    }
    const double l1 = profile.lambda1;
    const double l2 = profile.lambda2;
    if (!(l1 > l2) || !(l2 >= 0.0))
        throw ValidationError("closure profile requires lambda1 > lambda2 >= 0");
    return {l1, l2};
}

double m_projection(const SymTensor2& K, const Vec2& a, const Vec2& b) {
    if (!K.is_spd()) throw ValidationError("m_projection: tensor is not SPD");
    return K.inverse().quad(a, b);
}

std::vector<std::string> check_params(const PhysicalParams& p) {
    std::vector<std::string> errs;
    if (!(p.mu > 0.0)) errs.emplace_back("mu must be positive");
    if (!(p.mu_eff > 0.0)) errs.emplace_back("mu_eff must be positive");
    if (!(p.alpha > 0.0)) errs.emplace_back("alpha must be positive");
    if (!p.K_tr.is_spd()) errs.emplace_back("K_tr not SPD");
    if (!p.K_pm.is_spd()) errs.emplace_back("K_pm not SPD");
    if (!p.beta.is_psd()) errs.emplace_back("beta not PSD");
    return errs;
}

void validate_params(const PhysicalParams& p) {
    auto errs = check_params(p);
    if (errs.empty()) return;
    std::string msg = "invalid physical parameters:";
    for (const auto& e : errs) msg += " " + e + ";";
    throw ValidationError(msg, std::move(errs));
}

}  // namespace sbd
