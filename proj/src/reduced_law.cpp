#include "tsplate/reduced_law.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace tsplate {

const Eigen::Matrix<double, 5, 3>& reduced_deviator_map() {
    static const Eigen::Matrix<double, 5, 3> l = [] {
        Eigen::Matrix<double, 6, 3> embed = Eigen::Matrix<double, 6, 3>::Zero();
        embed(0, 0) = 1;
        embed(1, 1) = 1;
        embed(3, 2) = 1;
        // deviatoric projection removes the trace; the basis is orthogonal to the identity
        return Eigen::Matrix<double, 5, 3>(deviatoric_basis().transpose() * embed);
    }();
    return l;
}

ReducedLaw::ReducedLaw(const MaterialPhase& phase) : phase_(phase) { build(phase.yield); }

ReducedLaw::ReducedLaw(const MaterialPhase& phase, const YieldSet& yield) : phase_(phase) { build(yield); }

void ReducedLaw::build(const YieldSet& yield) {
    const Mat6 c = phase_.stiffness();
    // in-plane and transverse parts of the Mandel3 coordinates
    Eigen::Matrix<double, 6, 3> pi = Eigen::Matrix<double, 6, 3>::Zero();
    pi(0, 0) = 1;
    pi(1, 1) = 1;
    pi(3, 2) = 1;
    Eigen::Matrix<double, 6, 3> tr = Eigen::Matrix<double, 6, 3>::Zero();
    tr(4, 0) = kSqrt2;  // lambda1 at (13)
    tr(5, 1) = kSqrt2;  // lambda2 at (23)
    tr(2, 2) = 1;       // lambda3 at (33)

    const Mat3 s = tr.transpose() * c * tr;
    Eigen::LLT<Mat3> llt(s);
    if (llt.info() != Eigen::Success) throw std::runtime_error("reduction: singular transverse system");
    lambda_map_ = -llt.solve(tr.transpose() * c * pi);
    a_ = pi + tr * lambda_map_;
    c_r_ = a_.transpose() * c * a_;
    c_r_ = 0.5 * (c_r_ + c_r_.transpose());

    const auto& l = reduced_deviator_map();
    m_r_ = l.transpose() * yield.form() * l;
    m_r_ = 0.5 * (m_r_ + m_r_.transpose());
    m_r_inv_ = m_r_.inverse();
}

Vec3 ReducedLaw::lambda(const Sym2& xi) const { return lambda_map_ * xi.mandel(); }

Sym3 ReducedLaw::reduction_operator(const Sym2& xi) const { return Sym3::from_mandel(a_ * xi.mandel()); }

double ReducedLaw::energy(const Sym2& xi) const {
    const Mandel2 m = xi.mandel();
    return 0.5 * m.dot(c_r_ * m);
}

Sym3 ReducedLaw::tensor_apply(const Sym2& xi) const {
    return elasticity_apply(phase_, reduction_operator(xi));
}

double ReducedLaw::coercivity() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(c_r_, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().minCoeff();
}

double ReducedLaw::yield_gauge(const Sym2& sigma) const {
    const Mandel2 m = sigma.mandel();
    return std::sqrt(std::max(0.0, m.dot(m_r_ * m)));
}

bool ReducedLaw::yield_contains(const Sym2& sigma) const { return yield_gauge(sigma) <= 1 + 1e-14; }

double ReducedLaw::dissipation(const Sym2& xi) const {
    const Mandel2 m = xi.mandel();
    return std::sqrt(std::max(0.0, m.dot(m_r_inv_ * m)));
}

Sym2 ReducedLaw::dissipation_maximizer(const Sym2& xi) const {
    const double h = dissipation(xi);
    if (h == 0) return {};
    return Sym2::from_mandel(m_r_inv_ * xi.mandel() / h);
}

double ReducedLaw::r_H() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(m_r_inv_, Eigen::EigenvaluesOnly);
    return std::sqrt(es.eigenvalues().minCoeff());
}

double ReducedLaw::R_H() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(m_r_inv_, Eigen::EigenvaluesOnly);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

}  // namespace tsplate
