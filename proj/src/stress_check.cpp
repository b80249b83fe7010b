#include "tsplate/stress_check.hpp"

#include <algorithm>

namespace tsplate {

double StressReport::max() const {
    double m = 0;
    for (const auto& [name, v] : residuals) m = std::max(m, v);
    return m;
}

nlohmann::json StressReport::to_json() const {
    nlohmann::json j;
    j["residuals"] = residuals;
    j["max_residual"] = max();
    j["worst_point"] = {{"index", worst_point}, {"gauge", worst_gauge}, {"location", location}};
    if (!slack.empty()) {
        double lo = slack.front(), hi = slack.front(), mean = 0;
        for (double s : slack) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
            mean += s;
        }
        j["slack"] = {{"count", slack.size()}, {"min", lo}, {"max", hi}, {"mean", mean / slack.size()}};
    }
    return j;
}

namespace {

StressConditions from_kinds(const std::vector<DofKind>& kinds, Regime regime) {
    StressConditions c;
    if (regime == Regime::Gamma0)
        c.names = {"div_x sigma_bar", "div_x div_x sigma_hat", "div_y Sigma_bar", "div_y div_y Sigma_hat", "sigma_i3"};
    else
        c.names = {"div_x sigma_bar", "div_x div_x sigma_hat", "div_y Sigma", "div_y Sigma", "sigma_i3"};
    c.kind.resize(kinds.size());
    for (size_t i = 0; i < kinds.size(); ++i) c.kind[i] = static_cast<int>(kinds[i]);
    if (regime == Regime::GammaInf) {
        // both corrector kinds test the same condition
        for (int& k : c.kind)
            if (k == static_cast<int>(DofKind::MicroHat)) k = static_cast<int>(DofKind::MicroBar);
        c.names[3] = "unused";
    }
    return c;
}

void locate(StressReport& r, const LimitModel& m) {
    if (r.worst_point < 0) return;
    const auto& pt = m.product_points()[r.worst_point];
    r.location = {pt.x[0], pt.x[1], pt.x3, pt.y[0], pt.y[1]};
}

void drop_unused(StressReport& r) { r.residuals.erase("unused"); }

}  // namespace

StressConditions stress_conditions(const LimitModel0& model) {
    return from_kinds(model.free_dof_kinds(), Regime::Gamma0);
}

StressConditions stress_conditions(const LimitModelInf& model) {
    return from_kinds(model.free_dof_kinds(), Regime::GammaInf);
}

StressConditions stress_conditions(const Model3D& model) {
    StressConditions c;
    c.names = {"div_h sigma"};
    c.kind.assign(model.free_dofs(), 0);
    return c;
}

std::vector<Sym3> completed_stress(const LimitModel0& model, const std::vector<Mandel2>& E) {
    std::vector<Sym3> out(E.size());
    for (size_t p = 0; p < E.size(); ++p)
        out[p] = model.point_reduced_law(static_cast<int>(p)).tensor_apply(Sym2::from_mandel(E[p]));
    return out;
}

StressChecker<3, 3> stress_checker(const LimitModel0& model) {
    return StressChecker<3, 3>(model.discretization(), stress_conditions(model));
}

StressChecker<6, 5> stress_checker(const LimitModelInf& model) {
    return StressChecker<6, 5>(model.discretization(), stress_conditions(model));
}

StressChecker<6, 5> stress_checker(const Model3D& model) { return StressChecker<6, 5>(model, stress_conditions(model)); }

StressReport khom_residuals(const LimitModel0& model, StressChecker<3, 3>& checker, const std::vector<Mandel2>& sigma) {
    auto r = checker.residuals(sigma);
    // stored on the 2x2 minor: the transverse entries are zero by construction
    r.residuals["sigma_i3"] = 0;
    drop_unused(r);
    locate(r, model);
    return r;
}

StressReport khom_residuals(const LimitModelInf& model, StressChecker<6, 5>& checker, const std::vector<Mandel3>& sigma) {
    auto r = checker.residuals(sigma);
    drop_unused(r);
    locate(r, model);
    return r;
}

StressReport kh_residuals(const Model3D& model, StressChecker<6, 5>& checker, const std::vector<Mandel3>& sigma) {
    auto r = checker.residuals(sigma);
    if (r.worst_point >= 0) {
        const Vec3 x = model.point_position(r.worst_point);
        r.location = {x[0], x[1], x[2]};
    }
    return r;
}

StressReport khom_residuals(const LimitModel0& model, const std::vector<Mandel2>& sigma) {
    auto c = stress_checker(model);
    return khom_residuals(model, c, sigma);
}

StressReport khom_residuals(const LimitModelInf& model, const std::vector<Mandel3>& sigma) {
    auto c = stress_checker(model);
    return khom_residuals(model, c, sigma);
}

StressReport kh_residuals(const Model3D& model, const std::vector<Mandel3>& sigma) {
    auto c = stress_checker(model);
    return kh_residuals(model, c, sigma);
}

}  // namespace tsplate
