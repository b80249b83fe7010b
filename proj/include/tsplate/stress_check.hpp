#pragma once

#include <json.hpp>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tsplate/discretization.hpp"
#include "tsplate/limit_models.hpp"
#include "tsplate/linear_solver.hpp"
#include "tsplate/model_3d.hpp"

namespace tsplate {

//! Max residual per admissibility condition of a stress field, the worst yield point and
//! plastic-work slacks collected by the caller.
struct StressReport {
    std::map<std::string, double> residuals;
    int worst_point = -1;           // point with the largest yield gauge
    double worst_gauge = 0;
    std::vector<double> location;   // x1, x2, x3 (and y1, y2 for two-scale points)
    std::vector<double> slack;

    double max() const;
    nlohmann::json to_json() const;
};

//! Labels the free unknowns of a discretization: kind[i] indexes names.
struct StressConditions {
    std::vector<int> kind;
    std::vector<std::string> names;
};

StressConditions stress_conditions(const LimitModel0& model);
StressConditions stress_conditions(const LimitModelInf& model);
StressConditions stress_conditions(const Model3D& model);

//! Pointwise constitutive stress C E.
template <int D, int N>
typename Discretization<D, N>::Field stress_field(const Discretization<D, N>& disc,
                                                  const typename Discretization<D, N>::Field& E) {
    typename Discretization<D, N>::Field s(E.size());
    for (size_t p = 0; p < E.size(); ++p) s[p] = disc.point_law(static_cast<int>(p)).C * E[p];
    return s;
}

//! gamma = 0 stress C_r E on the 3x3 space; the transverse entries vanish.
std::vector<Sym3> completed_stress(const LimitModel0& model, const std::vector<Mandel2>& E);

//! Residuals of the discrete admissible stress set, admissible sampling and plastic-work slack
//! for one discretization. Equilibrium entries are |r_k|_{K^-1} / |sigma|_{C^-1} with r_k the
//! free rows of B^T W sigma belonging to condition k: the compliance-norm distance to the
//! equilibrated fields relative to the field.
template <int D, int N>
class StressChecker {
public:
    using Field = typename Discretization<D, N>::Field;

    StressChecker(const Discretization<D, N>& disc, StressConditions cond,
                  LinearSolverKind kind = LinearSolverKind::Cholesky)
        : disc_(disc), cond_(std::move(cond)), solver_(kind, 1e-12) {
        if (static_cast<int>(cond_.kind.size()) != disc_.free_dofs())
            throw std::invalid_argument("condition labels do not match the unknowns");
        solver_.factor(disc_.stiffness());
    }

    const StressConditions& conditions() const { return cond_; }

    StressReport residuals(const Field& s) {
        if (static_cast<int>(s.size()) != disc_.point_count()) throw std::invalid_argument("stress field has the wrong size");
        StressReport r;
        double viol = 0, norm2 = 0;
        for (int p = 0; p < disc_.point_count(); ++p) {
            const auto& law = disc_.point_law(p);
            const double g = law.gauge(s[p]);
            if (g > r.worst_gauge || r.worst_point < 0) {
                r.worst_gauge = g;
                r.worst_point = p;
            }
            viol = std::max(viol, g - 1);
            norm2 += disc_.point_weight(p) * s[p].dot(law.C.ldlt().solve(s[p]));
        }
        r.residuals["yield"] = viol;
        VecX rf;
        disc_.divergence(s, rf, nullptr);
        for (size_t k = 0; k < cond_.names.size(); ++k) {
            VecX rk = VecX::Zero(rf.size());
            bool any = false;
            for (Eigen::Index i = 0; i < rf.size(); ++i)
                if (cond_.kind[i] == static_cast<int>(k)) {
                    rk[i] = rf[i];
                    any = true;
                }
            double v = 0;
            if (any && norm2 > 0) v = std::sqrt(std::max(0.0, rk.dot(solver_.solve(rk))) / norm2);
            r.residuals[cond_.names[k]] = v;
        }
        return r;
    }

    //! s - C B K^-1 B^T W s over the free unknowns.
    Field project(const Field& s) {
        VecX rf;
        disc_.divergence(s, rf, nullptr);
        const VecX u = solver_.solve(rf);
        Field bu;
        disc_.strain(u, 0.0, bu);
        Field out(s.size());
        for (size_t p = 0; p < s.size(); ++p) out[p] = s[p] - disc_.point_law(static_cast<int>(p)).C * bu[p];
        return out;
    }

    //! Largest yield gauge over the points.
    double max_gauge(const Field& s) const {
        double g = 0;
        for (int p = 0; p < disc_.point_count(); ++p) g = std::max(g, disc_.point_law(p).gauge(s[p]));
        return g;
    }

    //! Random admissible field with max gauge theta: a Gaussian field projected onto the
    //! equilibrated fields in the C^-1 inner product, then scaled into the yield sets.
    template <class Rng>
    Field sample(Rng& rng, double theta) {
        std::normal_distribution<double> nd;
        Field s(disc_.point_count());
        for (auto& v : s)
            for (int k = 0; k < D; ++k) v[k] = nd(rng);
        s = project(s);
        const double g = max_gauge(s);
        for (auto& v : s) v *= theta / g;
        return s;
    }

    //! H(P) + int Sigma : E - a int Sigma : E(w) for the elastic strain E = B u + a B w - P.
    //! Throws std::invalid_argument when Sigma is not admissible within tol.
    double slack(const Field& sigma, const VecX& u, double amplitude, const Field& P, double tol = 1e-8) {
        const StressReport rep = residuals(sigma);
        if (rep.max() > tol) throw std::invalid_argument("stress is not admissible: residual " + std::to_string(rep.max()));
        Field T, W;
        disc_.strain(u, amplitude, T);
        disc_.datum_strain(W);
        double h = 0, se = 0, sw = 0;
        for (int p = 0; p < disc_.point_count(); ++p) {
            const double wt = disc_.point_weight(p);
            h += wt * disc_.point_law(p).dissipation(P[p]);
            se += wt * sigma[p].dot(T[p] - P[p]);
            sw += wt * sigma[p].dot(W[p]);
        }
        return h + se - amplitude * sw;
    }

private:
    const Discretization<D, N>& disc_;
    StressConditions cond_;
    SpdSolver solver_;
};

//! Checkers with the condition names of each model.
StressChecker<3, 3> stress_checker(const LimitModel0& model);
StressChecker<6, 5> stress_checker(const LimitModelInf& model);
StressChecker<6, 5> stress_checker(const Model3D& model);

//! One-shot residuals; the gamma = 0 report carries sigma_i3 = 0 and every report the worst
//! point location.
StressReport khom_residuals(const LimitModel0& model, const std::vector<Mandel2>& sigma);
StressReport khom_residuals(const LimitModelInf& model, const std::vector<Mandel3>& sigma);
StressReport kh_residuals(const Model3D& model, const std::vector<Mandel3>& sigma);
//! Same with an existing checker for the model.
StressReport khom_residuals(const LimitModel0& model, StressChecker<3, 3>& checker, const std::vector<Mandel2>& sigma);
StressReport khom_residuals(const LimitModelInf& model, StressChecker<6, 5>& checker, const std::vector<Mandel3>& sigma);
StressReport kh_residuals(const Model3D& model, StressChecker<6, 5>& checker, const std::vector<Mandel3>& sigma);

//! |H(dP) - int S : dP| relative to H(dP): zero when S attains the plastic work bound.
template <int D, int N>
double hill_gap(const Discretization<D, N>& disc, const typename Discretization<D, N>::Field& S,
                const typename Discretization<D, N>::Field& dP) {
    double h = 0, w = 0;
    for (int p = 0; p < disc.point_count(); ++p) {
        const double wt = disc.point_weight(p);
        h += wt * disc.point_law(p).dissipation(dP[p]);
        w += wt * S[p].dot(dP[p]);
    }
    return h > 0 ? std::abs(h - w) / h : std::abs(w);
}

}  // namespace tsplate
