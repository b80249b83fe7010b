#include "tsplate/material.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>
#include <stdexcept>

namespace tsplate {

namespace {

bool is_spd(const Mat5& m) {
    if ((m - m.transpose()).norm() > 1e-12 * m.norm()) return false;
    Eigen::SelfAdjointEigenSolver<Mat5> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > 0;
}

Mat5 mat5_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 5) throw std::invalid_argument("expected a 5x5 matrix");
    Mat5 m;
    for (int r = 0; r < 5; ++r) {
        if (!j[r].is_array() || j[r].size() != 5) throw std::invalid_argument("expected a 5x5 matrix");
        for (int c = 0; c < 5; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

nlohmann::json mat5_to_json(const Mat5& m) {
    nlohmann::json j = nlohmann::json::array();
    for (int r = 0; r < 5; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 5; ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

}  // namespace

YieldSet YieldSet::von_mises(double sigma_y) {
    if (!(sigma_y > 0)) throw std::invalid_argument("von Mises yield stress must be positive");
    YieldSet y;
    y.kind_ = Kind::VonMises;
    y.sigma_y_ = sigma_y;
    y.form_ = Mat5::Identity() / (sigma_y * sigma_y);
    y.inverse_form_ = Mat5::Identity() * (sigma_y * sigma_y);
    return y;
}

YieldSet YieldSet::ellipsoid(const Mat5& form) {
    if (!is_spd(form)) throw std::invalid_argument("ellipsoid yield form must be symmetric positive definite");
    YieldSet y;
    y.kind_ = Kind::Ellipsoid;
    y.form_ = 0.5 * (form + form.transpose());
    y.inverse_form_ = y.form_.inverse();
    return y;
}

double YieldSet::gauge(const Dev5& s) const {
    if (kind_ == Kind::VonMises) return s.norm() / sigma_y_;
    return std::sqrt(std::max(0.0, s.dot(form_ * s)));
}

double YieldSet::support(const Dev5& xi) const {
    if (kind_ == Kind::VonMises) return sigma_y_ * xi.norm();
    return std::sqrt(std::max(0.0, xi.dot(inverse_form_ * xi)));
}

double YieldSet::inner_radius() const {
    if (kind_ == Kind::VonMises) return sigma_y_;
    Eigen::SelfAdjointEigenSolver<Mat5> es(form_, Eigen::EigenvaluesOnly);
    return 1 / std::sqrt(es.eigenvalues().maxCoeff());
}

double YieldSet::outer_radius() const {
    if (kind_ == Kind::VonMises) return sigma_y_;
    Eigen::SelfAdjointEigenSolver<Mat5> es(form_, Eigen::EigenvaluesOnly);
    return 1 / std::sqrt(es.eigenvalues().minCoeff());
}

bool YieldSet::contained_in(const YieldSet& other, double tol) const {
    // {s M_a s <= 1} inside {s M_b s <= 1} iff every generalized eigenvalue of (M_b, M_a) is <= 1
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat5> es(other.form_, form_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() <= 1 + tol;
}

MaterialPhase MaterialPhase::isotropic(double mu, double k, double sigma_y) {
    MaterialPhase p;
    p.c_dev = 2 * mu * Mat5::Identity();
    p.k = k;
    p.yield = YieldSet::von_mises(sigma_y);
    p.validate();
    return p;
}

Mat6 MaterialPhase::stiffness() const {
    const auto& b = deviatoric_basis();
    Mandel3 v = Mandel3::Zero();
    v.head<3>().setConstant(1 / std::sqrt(3.0));
    Mat6 c = b * c_dev * b.transpose() + 3 * k * v * v.transpose();
    return 0.5 * (c + c.transpose());
}

double MaterialPhase::r_c() const {
    Eigen::SelfAdjointEigenSolver<Mat5> es(c_dev, Eigen::EigenvaluesOnly);
    return std::min(0.5 * es.eigenvalues().minCoeff(), 1.5 * k);
}

double MaterialPhase::R_c() const {
    Eigen::SelfAdjointEigenSolver<Mat5> es(c_dev, Eigen::EigenvaluesOnly);
    return std::max(0.5 * es.eigenvalues().maxCoeff(), 1.5 * k);
}

void MaterialPhase::validate() const {
    if (!is_spd(c_dev)) throw std::invalid_argument("deviatoric elasticity operator must be SPD");
    if (!(k > 0)) throw std::invalid_argument("bulk coefficient k must be positive");
}

MaterialPhase phase_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("phase must be a JSON object");
    MaterialPhase p;
    if (j.contains("c_dev")) {
        p.c_dev = mat5_from_json(j.at("c_dev"));
    } else if (j.contains("mu")) {
        p.c_dev = 2 * j.at("mu").get<double>() * Mat5::Identity();
    } else {
        throw std::invalid_argument("phase needs \"mu\" or \"c_dev\"");
    }
    if (!j.contains("k")) throw std::invalid_argument("phase needs \"k\"");
    p.k = j.at("k").get<double>();
    if (!j.contains("yield")) throw std::invalid_argument("phase needs \"yield\"");
    const auto& y = j.at("yield");
    const std::string type = y.at("type").get<std::string>();
    if (type == "von_mises") {
        p.yield = YieldSet::von_mises(y.at("sigma_y").get<double>());
    } else if (type == "ellipsoid") {
        p.yield = YieldSet::ellipsoid(mat5_from_json(y.at("form")));
    } else {
        throw std::invalid_argument("unknown yield type \"" + type + "\"");
    }
    if (j.contains("name")) p.name = j.at("name").get<std::string>();
    p.validate();
    return p;
}

nlohmann::json phase_to_json(const MaterialPhase& p) {
    nlohmann::json j;
    if ((p.c_dev - p.c_dev(0, 0) * Mat5::Identity()).norm() == 0)
        j["mu"] = 0.5 * p.c_dev(0, 0);
    else
        j["c_dev"] = mat5_to_json(p.c_dev);
    j["k"] = p.k;
    if (p.yield.kind() == YieldSet::Kind::VonMises)
        j["yield"] = {{"type", "von_mises"}, {"sigma_y", p.yield.sigma_y()}};
    else
        j["yield"] = {{"type", "ellipsoid"}, {"form", mat5_to_json(p.yield.form())}};
    if (!p.name.empty()) j["name"] = p.name;
    return j;
}

Sym3 elasticity_apply(const MaterialPhase& phase, const Sym3& xi) {
    const Dev5 d = to_dev5(xi);
    Sym3 s = from_dev5(phase.c_dev * d);
    const double p = phase.k * xi.trace();
    s.a11 += p;
    s.a22 += p;
    s.a33 += p;
    return s;
}

double quadratic_energy(const MaterialPhase& phase, const Sym3& xi) {
    return 0.5 * contract(elasticity_apply(phase, xi), xi);
}

void require_deviatoric(const Sym3& a, const char* where, double tol) {
    if (std::abs(a.trace()) > tol * a.norm())
        throw std::invalid_argument(std::string(where) + ": argument is not deviatoric");
}

bool yield_contains(const MaterialPhase& phase, const Sym3& sigma_dev) {
    require_deviatoric(sigma_dev, "yield_contains");
    return phase.yield.gauge(to_dev5(sigma_dev)) <= 1 + 1e-14;
}

}  // namespace tsplate
