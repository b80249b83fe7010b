#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tsplate/sym_tensor.hpp"

namespace tsplate {

//! Pointwise elastic-plastic law on Mandel coordinates of dimension D, with plastic strains in an
//! N-dimensional subspace spanned by the orthonormal columns of `basis` and yield set
//! { s : s^T M s <= 1 } for the projected stress s = basis^T sigma.
template <int D, int N>
struct PointLaw {
    using VecD = Eigen::Matrix<double, D, 1>;
    using VecN = Eigen::Matrix<double, N, 1>;
    using MatD = Eigen::Matrix<double, D, D>;
    using MatN = Eigen::Matrix<double, N, N>;
    using Basis = Eigen::Matrix<double, D, N>;

    MatD C = MatD::Identity();
    Basis basis = Basis::Identity();
    MatN M = MatN::Identity();

    // derived data, filled by finalize()
    MatN M_inv;
    MatN Cp;         // basis^T C basis
    MatN T;          // rows: eigenvectors of M^1/2 Cp M^1/2, applied after M^1/2
    MatN T_inv;      // inverse of T
    VecN a;          // eigenvalues of M^1/2 Cp M^1/2
    bool radial = false;

    PointLaw() = default;
    PointLaw(const MatD& c, const Basis& b, const MatN& m) : C(c), basis(b), M(m) { finalize(); }

    void finalize() {
        M_inv = M.inverse();
        Cp = basis.transpose() * C * basis;
        Eigen::SelfAdjointEigenSolver<MatN> ms(M);
        const MatN m_half = ms.operatorSqrt();
        const MatN m_half_inv = ms.operatorInverseSqrt();
        MatN A = m_half * Cp * m_half;
        A = 0.5 * (A + A.transpose());
        Eigen::SelfAdjointEigenSolver<MatN> es(A);
        a = es.eigenvalues();
        T = es.eigenvectors().transpose() * m_half;
        T_inv = m_half_inv * es.eigenvectors();
        radial = (a.maxCoeff() - a.minCoeff()) <= 1e-14 * a.maxCoeff();
    }

    VecD stress(const VecD& elastic_strain) const { return C * elastic_strain; }
    double energy(const VecD& elastic_strain) const { return 0.5 * elastic_strain.dot(C * elastic_strain); }
    double gauge(const VecD& sigma) const {
        const VecN s = basis.transpose() * sigma;
        return std::sqrt(std::max(0.0, s.dot(M * s)));
    }
    //! Support function of the yield set at a plastic strain (taken in the subspace).
    double dissipation(const VecD& p) const {
        const VecN q = basis.transpose() * p;
        return std::sqrt(std::max(0.0, q.dot(M_inv * q)));
    }
};

using Law3 = PointLaw<6, 5>;
using Law2 = PointLaw<3, 3>;

template <int D, int N>
struct ReturnResult {
    Eigen::Matrix<double, D, 1> dp;      // plastic increment
    Eigen::Matrix<double, D, 1> stress;  // stress after the update
    double multiplier = 0;
    int iterations = 0;
    bool plastic = false;
};

struct ReturnMappingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//! Minimizes 0.5 C(e - dp):(e - dp) + H(dp) over dp in the plastic subspace, where e is the
//! trial elastic strain. The multiplier solves |(I + l A)^-1 z|^2 = 1 by monotone Newton.
template <int D, int N>
ReturnResult<D, N> return_map(const PointLaw<D, N>& law, const Eigen::Matrix<double, D, 1>& trial,
                              double tol = 1e-13, int max_iter = 100) {
    using VecN = Eigen::Matrix<double, N, 1>;
    ReturnResult<D, N> r;
    const auto sigma_trial = (law.C * trial).eval();
    const VecN s_trial = law.basis.transpose() * sigma_trial;
    const VecN z = law.T * s_trial;  // rotated, normalized coordinates: gauge = |z|
    const double g = z.norm();
    if (g <= 1) {
        r.dp.setZero();
        r.stress = sigma_trial;
        return r;
    }
    double l;
    if (law.radial) {
        l = (g - 1) / law.a[0];
    } else {
        l = 0;
        for (int it = 0; it < max_iter; ++it) {
            double f = -1, df = 0;
            for (int i = 0; i < N; ++i) {
                const double q = 1 / (1 + l * law.a[i]);
                const double zi2 = z[i] * z[i] * q * q;
                f += zi2;
                df -= 2 * zi2 * law.a[i] * q;
            }
            const double step = f / df;
            l -= step;
            r.iterations = it + 1;
            if (std::abs(step) <= tol * (1 + std::abs(l)) || std::abs(f) <= tol) break;
            if (it + 1 == max_iter) throw ReturnMappingError("return mapping: Newton did not converge");
        }
    }
    VecN zs;
    for (int i = 0; i < N; ++i) zs[i] = z[i] / (1 + l * law.a[i]);
    const VecN s = law.T_inv * zs;
    const VecN dq = l * (law.M * s);
    r.dp = law.basis * dq;
    r.stress = sigma_trial - law.C * r.dp;
    r.multiplier = l;
    r.plastic = true;
    return r;
}

}  // namespace tsplate
