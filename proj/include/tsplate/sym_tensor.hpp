#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace tsplate {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

//! Orthonormal coordinates of a symmetric 2x2 matrix: (a11, a22, sqrt2*a12).
using Mandel2 = Eigen::Matrix<double, 3, 1>;
//! Orthonormal coordinates of a symmetric 3x3 matrix:
//! (a11, a22, a33, sqrt2*a12, sqrt2*a13, sqrt2*a23).
using Mandel3 = Eigen::Matrix<double, 6, 1>;
//! Coordinates in the orthonormal deviatoric basis returned by deviatoric_basis().
using Dev5 = Eigen::Matrix<double, 5, 1>;

using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double kSqrt2 = 1.41421356237309504880;

struct Sym2 {
    double a11 = 0, a22 = 0, a12 = 0;

    static Sym2 identity() { return {1, 1, 0}; }
    static Sym2 from_mandel(const Mandel2& m) { return {m[0], m[1], m[2] / kSqrt2}; }
    static Sym2 from_matrix(const Eigen::Matrix2d& a) { return {a(0, 0), a(1, 1), 0.5 * (a(0, 1) + a(1, 0))}; }

    Mandel2 mandel() const { return {a11, a22, kSqrt2 * a12}; }
    Eigen::Matrix2d matrix() const {
        Eigen::Matrix2d m;
        m << a11, a12, a12, a22;
        return m;
    }
    double trace() const { return a11 + a22; }
    double norm() const { return std::sqrt(a11 * a11 + a22 * a22 + 2 * a12 * a12); }

    Sym2& operator+=(const Sym2& b) { a11 += b.a11; a22 += b.a22; a12 += b.a12; return *this; }
    Sym2& operator-=(const Sym2& b) { a11 -= b.a11; a22 -= b.a22; a12 -= b.a12; return *this; }
    Sym2& operator*=(double s) { a11 *= s; a22 *= s; a12 *= s; return *this; }
};

inline Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
inline Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
inline Sym2 operator*(double s, Sym2 a) { return a *= s; }
inline Sym2 operator*(Sym2 a, double s) { return a *= s; }
inline double contract(const Sym2& a, const Sym2& b) {
    return a.a11 * b.a11 + a.a22 * b.a22 + 2 * a.a12 * b.a12;
}

struct Sym3 {
    double a11 = 0, a22 = 0, a33 = 0, a12 = 0, a13 = 0, a23 = 0;

    static Sym3 identity() { return {1, 1, 1, 0, 0, 0}; }
    static Sym3 diag(double d1, double d2, double d3) { return {d1, d2, d3, 0, 0, 0}; }
    static Sym3 from_mandel(const Mandel3& m) {
        return {m[0], m[1], m[2], m[3] / kSqrt2, m[4] / kSqrt2, m[5] / kSqrt2};
    }
    static Sym3 from_matrix(const Mat3& a) {
        return {a(0, 0), a(1, 1), a(2, 2), 0.5 * (a(0, 1) + a(1, 0)), 0.5 * (a(0, 2) + a(2, 0)),
                0.5 * (a(1, 2) + a(2, 1))};
    }

    Mandel3 mandel() const {
        Mandel3 m;
        m << a11, a22, a33, kSqrt2 * a12, kSqrt2 * a13, kSqrt2 * a23;
        return m;
    }
    Mat3 matrix() const {
        Mat3 m;
        m << a11, a12, a13, a12, a22, a23, a13, a23, a33;
        return m;
    }
    double trace() const { return a11 + a22 + a33; }
    double norm() const {
        return std::sqrt(a11 * a11 + a22 * a22 + a33 * a33 + 2 * (a12 * a12 + a13 * a13 + a23 * a23));
    }

    Sym3& operator+=(const Sym3& b) {
        a11 += b.a11; a22 += b.a22; a33 += b.a33; a12 += b.a12; a13 += b.a13; a23 += b.a23;
        return *this;
    }
    Sym3& operator-=(const Sym3& b) {
        a11 -= b.a11; a22 -= b.a22; a33 -= b.a33; a12 -= b.a12; a13 -= b.a13; a23 -= b.a23;
        return *this;
    }
    Sym3& operator*=(double s) {
        a11 *= s; a22 *= s; a33 *= s; a12 *= s; a13 *= s; a23 *= s;
        return *this;
    }
};

inline Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
inline Sym3 operator-(Sym3 a, const Sym3& b) { return a -= b; }
inline Sym3 operator*(double s, Sym3 a) { return a *= s; }
inline Sym3 operator*(Sym3 a, double s) { return a *= s; }
inline double contract(const Sym3& a, const Sym3& b) {
    return a.a11 * b.a11 + a.a22 * b.a22 + a.a33 * b.a33 +
           2 * (a.a12 * b.a12 + a.a13 * b.a13 + a.a23 * b.a23);
}

//! Deviatoric part A - (tr A / 3) I.
inline Sym3 dev3(const Sym3& a) {
    const double m = a.trace() / 3.0;
    Sym3 d = a;
    d.a11 -= m;
    d.a22 -= m;
    d.a33 = -(d.a11 + d.a22);  // keeps the trace exactly zero
    return d;
}

inline Sym2 sym_outer(const Vec2& a, const Vec2& b) {
    return {a[0] * b[0], a[1] * b[1], 0.5 * (a[0] * b[1] + a[1] * b[0])};
}

inline Sym3 sym_outer(const Vec3& a, const Vec3& b) {
    return {a[0] * b[0], a[1] * b[1], a[2] * b[2], 0.5 * (a[0] * b[1] + a[1] * b[0]),
            0.5 * (a[0] * b[2] + a[2] * b[0]), 0.5 * (a[1] * b[2] + a[2] * b[1])};
}

//! Anisotropic rescaling: (i3) entries by 1/h, (33) by 1/h^2. Throws for h <= 0.
Sym3 lambda_h(const Sym3& xi, double h);

//! Same scaling as a diagonal factor on Mandel coordinates.
Mandel3 lambda_h_factors(double h);

inline Sym2 minor2(const Sym3& a) { return {a.a11, a.a22, a.a12}; }
inline Sym3 embed2to3(const Sym2& b) { return {b.a11, b.a22, 0, b.a12, 0, 0}; }

//! Orthonormal basis of the deviatoric subspace in Mandel3 coordinates (columns).
const Eigen::Matrix<double, 6, 5>& deviatoric_basis();

inline Dev5 to_dev5(const Sym3& a) { return deviatoric_basis().transpose() * a.mandel(); }
inline Sym3 from_dev5(const Dev5& d) { return Sym3::from_mandel(deviatoric_basis() * d); }

}  // namespace tsplate
