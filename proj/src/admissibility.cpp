#include "tsplate/admissibility.hpp"

#include <stdexcept>

namespace tsplate {

namespace {

double kl_boundary_residual(const MacroGrid& g, const KLState& u, const BoundaryDatum& w, double a) {
    double r = 0;
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            if (!g.on_boundary(i, j)) continue;
            const Vec2 x = g.position(i, j);
            const Vec2 wb(w.w1.value(x), w.w2.value(x));
            r = std::max(r, (u.ubar[g.node(i, j)] - a * wb).cwiseAbs().maxCoeff());
            r = std::max(r, std::abs(u.u3[g.ghost_node(i, j)] - a * w.w3.value(x)));
        }
    // ghost values carry the slope condition relative to their mirror node
    for (int j = -1; j <= g.n2; ++j)
        for (int i = -1; i <= g.n1; ++i) {
            if (!g.is_ghost(i, j)) continue;
            const auto m = g.ghost_mirror(i, j);
            const double want = a * (w.w3.value(g.position(i, j)) - w.w3.value(g.position(m[0], m[1])));
            const double have = u.u3[g.ghost_node(i, j)] - u.u3[g.ghost_node(m[0], m[1])];
            r = std::max(r, std::abs(have - want));
        }
    return r;
}

template <class Model, int D>
AdmissibilityReport twoscale_common(const Model& model, const TwoScaleState& s, double amplitude) {
    const auto& disc = model.discretization();
    if (s.E.rows() != disc.point_count() || s.P.rows() != disc.point_count() || s.E.cols() != D || s.P.cols() != D)
        throw std::invalid_argument("two-scale state does not match the model");
    AdmissibilityReport r;
    VecX u, ufix;
    model.pack(s, u, ufix);
    std::vector<Eigen::Matrix<double, D, 1>> T;
    disc.strain_with_fixed(u, ufix, T);
    for (size_t k = 0; k < T.size(); ++k)
        r.interior = std::max(r.interior, (T[k] - s.E.row(k).transpose() - s.P.row(k).transpose()).norm());
    r.boundary = kl_boundary_residual(model.macro(), s.u, model.datum(), amplitude);
    const int ny = model.micro().node_count();
    const size_t groups = s.kappa.size() / ny;
    for (size_t g = 0; g < groups; ++g) {
        Vec2 m = Vec2::Zero();
        double k = 0;
        for (int n = 0; n < ny; ++n) {
            m += s.mu[g * ny + n];
            k += s.kappa[g * ny + n];
        }
        r.corrector = std::max({r.corrector, m.cwiseAbs().maxCoeff() / ny, std::abs(k) / ny});
    }
    return r;
}

}  // namespace

nlohmann::json AdmissibilityReport::to_json() const {
    return {{"interior", interior}, {"boundary", boundary}, {"trace", trace}, {"corrector", corrector}, {"max", max()}};
}

AdmissibilityReport admissibility_residual_h(const Model3D& model, const std::vector<Vec3>& u,
                                             const std::vector<Sym3>& e, const std::vector<Sym3>& p,
                                             const BoundaryDatum& w, double amplitude) {
    if (e.size() != p.size() || static_cast<int>(e.size()) != model.point_count())
        throw std::invalid_argument("strain fields do not match the model");
    AdmissibilityReport r;
    const auto eu = model.unscaled_strain(u);
    const Mandel3 lam = lambda_h_factors(model.h());
    for (size_t k = 0; k < eu.size(); ++k) {
        r.interior = std::max(r.interior, (eu[k] - e[k] - p[k]).norm());
        r.trace = std::max(r.trace, std::abs(lam.head<3>().dot(p[k].mandel().head<3>())));
    }
    const auto& g = model.plane();
    for (int k = 0; k <= model.layers(); ++k)
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) {
                if (!model.lateral(i, j)) continue;
                const int n = model.node(i, j, k);
                const Vec3 x = model.node_position(n);
                const Vec3 d = u[n] - amplitude * w.displacement(x.head<2>(), x[2]);
                r.boundary = std::max(r.boundary, d.cwiseAbs().maxCoeff());
            }
    return r;
}

AdmissibilityReport admissibility_residual_h(const Model3D& model, const VecX& u, double amplitude,
                                             const std::vector<Mandel3>& scaled_e,
                                             const std::vector<Mandel3>& scaled_p) {
    const Mandel3 inv = lambda_h_factors(model.h()).cwiseInverse();
    std::vector<Sym3> e(scaled_e.size()), p(scaled_p.size());
    for (size_t k = 0; k < e.size(); ++k) e[k] = Sym3::from_mandel(inv.cwiseProduct(scaled_e[k]));
    for (size_t k = 0; k < p.size(); ++k) p[k] = Sym3::from_mandel(inv.cwiseProduct(scaled_p[k]));
    // the datum is recovered from the prescribed values, so only the fields are compared here
    AdmissibilityReport r;
    const auto nodal = model.displacement(u, amplitude);
    const auto eu = model.unscaled_strain(nodal);
    if (eu.size() != e.size() || e.size() != p.size()) throw std::invalid_argument("strain fields do not match the model");
    for (size_t k = 0; k < eu.size(); ++k) {
        r.interior = std::max(r.interior, (eu[k] - e[k] - p[k]).norm());
        r.trace = std::max(r.trace, std::abs(scaled_p[k].head<3>().sum()));
    }
    return r;
}

AdmissibilityReport admissibility_residual_KL(const MacroGrid& g, const KLState& u, const KLStrain& e,
                                              const KLStrain& p, const BoundaryDatum& w, double amplitude) {
    const int nt = g.triangle_count();
    if (static_cast<int>(e.bar.size()) != nt || static_cast<int>(e.hat.size()) != nt ||
        static_cast<int>(p.bar.size()) != nt || static_cast<int>(p.hat.size()) != nt)
        throw std::invalid_argument("moment fields do not match the grid");
    AdmissibilityReport r;
    const KLStrain s = kl_strain(g, u);
    for (int t = 0; t < nt; ++t) {
        r.interior = std::max(r.interior, (s.bar[t] - e.bar[t] - p.bar[t]).norm());
        r.interior = std::max(r.interior, (s.hat[t] - e.hat[t] - p.hat[t]).norm());
    }
    r.boundary = kl_boundary_residual(g, u, w, amplitude);
    return r;
}

AdmissibilityReport twoscale_residual(const LimitModel0& model, const TwoScaleState& s, double amplitude) {
    return twoscale_common<LimitModel0, 3>(model, s, amplitude);
}

AdmissibilityReport twoscale_residual(const LimitModelInf& model, const TwoScaleState& s, double amplitude) {
    AdmissibilityReport r = twoscale_common<LimitModelInf, 6>(model, s, amplitude);
    for (Eigen::Index k = 0; k < s.P.rows(); ++k) r.trace = std::max(r.trace, std::abs(s.P(k, 0) + s.P(k, 1) + s.P(k, 2)));
    return r;
}

}  // namespace tsplate
