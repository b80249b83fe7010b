#include "tsplate/scaled_gradient.hpp"

#include <stdexcept>

namespace tsplate {

Sym3 lambda_h(const Sym3& xi, double h) {
    if (!(h > 0)) throw std::invalid_argument("lambda_h: thickness must be positive");
    Sym3 r = xi;
    r.a13 /= h;
    r.a23 /= h;
    r.a33 /= h * h;
    return r;
}

Mandel3 lambda_h_factors(double h) {
    if (!(h > 0)) throw std::invalid_argument("lambda_h: thickness must be positive");
    Mandel3 f;
    f << 1, 1, 1 / (h * h), 1, 1 / h, 1 / h;
    return f;
}

const Eigen::Matrix<double, 6, 5>& deviatoric_basis() {
    static const Eigen::Matrix<double, 6, 5> basis = [] {
        Eigen::Matrix<double, 6, 5> b = Eigen::Matrix<double, 6, 5>::Zero();
        const double s2 = 1 / std::sqrt(2.0), s6 = 1 / std::sqrt(6.0);
        b(0, 0) = s2;
        b(1, 0) = -s2;
        b(0, 1) = s6;
        b(1, 1) = s6;
        b(2, 1) = -2 * s6;
        b(3, 2) = 1;
        b(4, 3) = 1;
        b(5, 4) = 1;
        return b;
    }();
    return basis;
}

namespace {

// derivative along one axis: centered inside, one-sided at the ends
double axis_diff(const std::vector<Vec3>& v, const GridShape& s, int i, int j, int k, int axis, int comp,
                 double d) {
    int n = axis == 0 ? s.n1 : (axis == 1 ? s.n2 : s.n3);
    int c = axis == 0 ? i : (axis == 1 ? j : k);
    auto at = [&](int off) {
        int ii = i, jj = j, kk = k;
        (axis == 0 ? ii : (axis == 1 ? jj : kk)) += off;
        return v[s.index(ii, jj, kk)][comp];
    };
    if (c == 0) return (at(1) - at(0)) / d;
    if (c == n - 1) return (at(0) - at(-1)) / d;
    return (at(1) - at(-1)) / (2 * d);
}

}  // namespace

std::vector<Sym3> scaled_sym_gradient(const ScaledGradientStencil& st, const GridShape& s,
                                      const std::vector<Vec3>& v) {
    if (s.n1 < 2 || s.n2 < 2 || s.n3 < 2)
        throw std::invalid_argument("scaled_sym_gradient: need at least two nodes per axis");
    if (static_cast<int>(v.size()) != s.size())
        throw std::invalid_argument("scaled_sym_gradient: field size does not match grid");
    if (!(st.h > 0)) throw std::invalid_argument("scaled_sym_gradient: thickness must be positive");
    std::vector<Sym3> out(v.size());
    const double d[3] = {st.dx1, st.dx2, st.dx3};
    for (int k = 0; k < s.n3; ++k)
        for (int j = 0; j < s.n2; ++j)
            for (int i = 0; i < s.n1; ++i) {
                Mat3 g;  // g(c, a) = d_a v_c, with the transverse column divided by h
                for (int a = 0; a < 3; ++a)
                    for (int c = 0; c < 3; ++c) g(c, a) = axis_diff(v, s, i, j, k, a, c, d[a]);
                g.col(2) /= st.h;
                out[s.index(i, j, k)] = Sym3::from_matrix(g);
            }
    return out;
}

}  // namespace tsplate
