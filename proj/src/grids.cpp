#include "tsplate/grids.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

namespace tsplate {

TransverseRule TransverseRule::gauss(int n) {
    if (n < 1) throw std::invalid_argument("transverse rule needs at least one point");
    // Golub-Welsch on the Legendre Jacobi matrix
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1);
        j(k, k - 1) = j(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    TransverseRule r;
    for (int k = 0; k < n; ++k) {
        double x = es.eigenvalues()[k];
        if (std::abs(x) < 1e-15) x = 0;
        const double v = es.eigenvectors()(0, k);
        r.z.push_back(0.5 * x);
        r.w.push_back(v * v);
    }
    // symmetrize so odd moments vanish to roundoff
    for (int k = 0; k < n / 2; ++k) {
        const double z = 0.5 * (r.z[n - 1 - k] - r.z[k]);
        const double w = 0.5 * (r.w[k] + r.w[n - 1 - k]);
        r.z[k] = -z;
        r.z[n - 1 - k] = z;
        r.w[k] = r.w[n - 1 - k] = w;
    }
    double s = 0;
    for (double w : r.w) s += w;
    for (double& w : r.w) w /= s;
    return r;
}

namespace {

GridTriangle make_triangle(int ci, int cj, bool upper, double d1, double d2,
                           const std::array<int, 4>& corners /* (i,j),(i+1,j),(i+1,j+1),(i,j+1) */) {
    GridTriangle t;
    t.cell_i = ci;
    t.cell_j = cj;
    t.upper = upper;
    t.area = 0.5 * d1 * d2;
    if (!upper) {
        t.nodes = {corners[0], corners[1], corners[2]};
        t.grad = {Vec2(-1 / d1, 0), Vec2(1 / d1, -1 / d2), Vec2(0, 1 / d2)};
        t.corner = corners[1];
        t.corner_i = ci + 1;
        t.corner_j = cj;
        t.centroid = Vec2((ci + 2.0 / 3) * d1, (cj + 1.0 / 3) * d2);
    } else {
        t.nodes = {corners[0], corners[2], corners[3]};
        t.grad = {Vec2(0, -1 / d2), Vec2(1 / d1, 0), Vec2(-1 / d1, 1 / d2)};
        t.corner = corners[3];
        t.corner_i = ci;
        t.corner_j = cj + 1;
        t.centroid = Vec2((ci + 1.0 / 3) * d1, (cj + 2.0 / 3) * d2);
    }
    return t;
}

}  // namespace

void MacroGrid::validate() const {
    if (n1 < 3 || n2 < 3) throw std::invalid_argument("mid-plane grid needs at least 3 nodes per axis");
    if (!(a > 0 && b > 0)) throw std::invalid_argument("plate extents must be positive");
}

GridTriangle MacroGrid::triangle(int t) const {
    const int cell = t / 2;
    const int ci = cell % (n1 - 1), cj = cell / (n1 - 1);
    return make_triangle(ci, cj, t % 2 == 1, d1(), d2(),
                         {node(ci, cj), node(ci + 1, cj), node(ci + 1, cj + 1), node(ci, cj + 1)});
}

int MicroGrid::node(int i, int j) const {
    i %= n;
    j %= n;
    if (i < 0) i += n;
    if (j < 0) j += n;
    return i + n * j;
}

GridTriangle MicroGrid::triangle(int t) const {
    const int cell = t / 2;
    const int ci = cell % n, cj = cell / n;
    return make_triangle(ci, cj, t % 2 == 1, d(), d(),
                         {node(ci, cj), node(ci + 1, cj), node(ci + 1, cj + 1), node(ci, cj + 1)});
}

namespace {

template <class NodeFn>
std::array<Stencil, 3> hessian_stencil(NodeFn node, int i, int j, double d1, double d2) {
    std::array<Stencil, 3> s;
    s[0].add(node(i + 1, j), 1 / (d1 * d1));
    s[0].add(node(i, j), -2 / (d1 * d1));
    s[0].add(node(i - 1, j), 1 / (d1 * d1));
    s[1].add(node(i, j + 1), 1 / (d2 * d2));
    s[1].add(node(i, j), -2 / (d2 * d2));
    s[1].add(node(i, j - 1), 1 / (d2 * d2));
    const double q = 1 / (4 * d1 * d2);
    s[2].add(node(i + 1, j + 1), q);
    s[2].add(node(i + 1, j - 1), -q);
    s[2].add(node(i - 1, j + 1), -q);
    s[2].add(node(i - 1, j - 1), q);
    return s;
}

}  // namespace

std::array<Stencil, 3> macro_hessian_stencil(const MacroGrid& g, const GridTriangle& t) {
    const int i = t.corner_i, j = t.corner_j;
    const double d1 = g.d1(), d2 = g.d2();
    std::array<Stencil, 3> s;
    s[0].add(g.ghost_node(i + 1, j), 1 / (d1 * d1));
    s[0].add(g.ghost_node(i, j), -2 / (d1 * d1));
    s[0].add(g.ghost_node(i - 1, j), 1 / (d1 * d1));
    s[1].add(g.ghost_node(i, j + 1), 1 / (d2 * d2));
    s[1].add(g.ghost_node(i, j), -2 / (d2 * d2));
    s[1].add(g.ghost_node(i, j - 1), 1 / (d2 * d2));
    const double q = 1 / (d1 * d2);
    const int ci = t.cell_i, cj = t.cell_j;
    s[2].add(g.ghost_node(ci + 1, cj + 1), q);
    s[2].add(g.ghost_node(ci + 1, cj), -q);
    s[2].add(g.ghost_node(ci, cj + 1), -q);
    s[2].add(g.ghost_node(ci, cj), q);
    return s;
}

std::array<int, 2> MacroGrid::ghost_mirror(int i, int j) const {
    if (i < 0) i = 1;
    if (i >= n1) i = n1 - 2;
    if (j < 0) j = 1;
    if (j >= n2) j = n2 - 2;
    return {i, j};
}

std::array<Stencil, 3> micro_hessian_stencil(const MicroGrid& g, int i, int j) {
    return hessian_stencil([&](int a, int b) { return g.node(a, b); }, i, j, g.d(), g.d());
}

}  // namespace tsplate
