#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "tsplate/grids.hpp"

namespace tsplate {

//! Transverse decomposition f = bar + x3 hat + perp of values at the points of a rule.
template <class T>
struct MomentTriple {
    T bar{};
    T hat{};
    std::vector<T> perp;
};

//! bar = int_I f, hat = 12 int_I x3 f, perp = f - bar - x3 hat, all by the rule's quadrature.
template <class T>
MomentTriple<T> moments(const TransverseRule& rule, const std::vector<T>& f) {
    if (static_cast<int>(f.size()) != rule.size())
        throw std::invalid_argument("moments: field size does not match the transverse rule");
    MomentTriple<T> m;
    m.bar = 0 * f[0];
    m.hat = 0 * f[0];
    for (int q = 0; q < rule.size(); ++q) {
        m.bar = m.bar + rule.w[q] * f[q];
        m.hat = m.hat + (12 * rule.w[q] * rule.z[q]) * f[q];
    }
    m.perp.resize(f.size());
    for (int q = 0; q < rule.size(); ++q) m.perp[q] = f[q] - m.bar - rule.z[q] * m.hat;
    return m;
}

//! Samples of a field on Y at the nodes of an n x n periodic grid, interpolated bilinearly.
struct PeriodicField {
    int n = 1;
    std::vector<double> values;  // node (i,j) at index i + n*j, y = (i/n, j/n)
    double operator()(const Vec2& y) const;
};

//! F(x'/eps) with periodic wrap. Throws for eps <= 0.
double periodic_sample(const PeriodicField& f, double eps, const Vec2& x);

//! Quadrature point of (omega or Omega) x Y.
struct ProductPoint {
    Vec2 x;
    double x3 = 0;
    Vec2 y;
    double weight = 0;
};

//! Cell-anchor unfolding map: eps floor(x'/eps) + eps y.
Vec2 unfold_point(const Vec2& x, const Vec2& y, double eps);

template <class T>
using SpatialField = std::function<T(const Vec2& x, double x3)>;

//! T_eps f evaluated at product points.
template <class T>
std::vector<T> unfold(const SpatialField<T>& f, double eps, const std::vector<ProductPoint>& pts) {
    if (!(eps > 0)) throw std::invalid_argument("unfold: eps must be positive");
    std::vector<T> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(f(unfold_point(p.x, p.y, eps), p.x3));
    return out;
}

//! Weighted L2 norm over product points of T_eps f - F; `norm` maps a value to its pointwise norm.
template <class T, class Norm>
double two_scale_error(const SpatialField<T>& f, double eps, const std::vector<ProductPoint>& pts,
                       const std::vector<T>& F, Norm norm) {
    if (F.size() != pts.size()) throw std::invalid_argument("two_scale_error: shape mismatch");
    const auto tf = unfold(f, eps, pts);
    double s = 0;
    for (size_t k = 0; k < pts.size(); ++k) {
        const double e = norm(tf[k] - F[k]);
        s += pts[k].weight * e * e;
    }
    return std::sqrt(s);
}

}  // namespace tsplate
