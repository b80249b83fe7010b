#pragma once

#include <algorithm>
#include <random>

#include "tsplate/material.hpp"

namespace tsplate::oracle {

inline Sym3 completion(const Sym2& xi, const Vec3& l) {
    Sym3 a = embed2to3(xi);
    a.a13 = l[0];
    a.a23 = l[1];
    a.a33 = l[2];
    return a;
}

// coarse grid search over [-2,2]^3, then the exact minimizer of the quadratic through
// finite-difference gradient and Hessian at the best grid point
inline Vec3 lambda(const MaterialPhase& ph, const Sym2& xi) {
    auto f = [&](const Vec3& l) { return quadratic_energy(ph, completion(xi, l)); };
    Vec3 best = Vec3::Zero();
    double fb = f(best);
    const int n = 40;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k) {
                const Vec3 l(-2 + 4.0 * i / n, -2 + 4.0 * j / n, -2 + 4.0 * k / n);
                const double v = f(l);
                if (v < fb) fb = v, best = l;
            }
    // quadratic: exact central differences with step 1
    Mat3 hess;
    Vec3 grad;
    for (int a = 0; a < 3; ++a) {
        const Vec3 ea = Vec3::Unit(a);
        grad[a] = 0.5 * (f(best + ea) - f(best - ea));
        for (int b = 0; b < 3; ++b) {
            const Vec3 eb = Vec3::Unit(b);
            hess(a, b) = 0.25 * (f(best + ea + eb) - f(best + ea - eb) - f(best - ea + eb) + f(best - ea - eb));
        }
    }
    return best - hess.ldlt().solve(grad);
}

inline double reduced_gauge(double sigma_y, const Sym2& s) { return dev3(embed2to3(s)).norm() / sigma_y; }

// max of s : xi over boundary points of K_r reached along random directions in Sym2
inline double sampled_reduced_support(double sigma_y, const Sym2& xi, int samples) {
    std::mt19937 rng(17);
    std::normal_distribution<double> n;
    double best = -1e300;
    for (int k = 0; k < samples; ++k) {
        Sym2 d{n(rng), n(rng), n(rng)};
        d *= 1 / reduced_gauge(sigma_y, d);
        best = std::max(best, contract(d, xi));
    }
    return best;
}

// pointwise objective along the trial direction: m -> mu (m - 1)^2 + sigma_y m for |e_dev| = 1
inline double prox(double mu, double sigma_y) {
    double best = 0, fb = mu;
    for (int i = 0; i <= 200000; ++i) {
        const double m = 2.0 * i / 200000;
        const double f = mu * (m - 1) * (m - 1) + sigma_y * m;
        if (f < fb) fb = f, best = m;
    }
    // refine on the parabola through the three neighbouring grid points
    const double d = 1e-5;
    auto f = [&](double m) { return mu * (m - 1) * (m - 1) + sigma_y * m; };
    const double f0 = f(best - d), f1 = f(best), f2 = f(best + d);
    return best - 0.5 * d * (f2 - f0) / (f2 - 2 * f1 + f0);
}

}  // namespace tsplate::oracle
