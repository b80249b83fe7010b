#pragma once

#include <array>
#include <vector>

#include "tsplate/sym_tensor.hpp"

namespace tsplate {

//! Gauss-Legendre rule on I = (-1/2, 1/2) with weights summing to 1.
struct TransverseRule {
    std::vector<double> z, w;
    static TransverseRule gauss(int n);
    int size() const { return static_cast<int>(z.size()); }
};

//! Linear triangle of a structured grid. Cell (i, j) is split along its rising diagonal into
//! a lower triangle (i,j),(i+1,j),(i+1,j+1) and an upper triangle (i,j),(i+1,j+1),(i,j+1).
struct GridTriangle {
    std::array<int, 3> nodes;
    std::array<Vec2, 3> grad;  // gradients of the three nodal hat functions
    int corner;                // node at the right angle
    int corner_i, corner_j;    // its grid coordinates
    Vec2 centroid;
    double area;
    int cell_i, cell_j;
    bool upper;
};

//! Mid-plane grid on the rectangle [0,a] x [0,b] with n1 x n2 nodes; node (i,j) = i + n1*j.
struct MacroGrid {
    double a = 1, b = 1;
    int n1 = 2, n2 = 2;

    double d1() const { return a / (n1 - 1); }
    double d2() const { return b / (n2 - 1); }
    int node(int i, int j) const { return i + n1 * j; }
    int node_count() const { return n1 * n2; }
    int triangle_count() const { return 2 * (n1 - 1) * (n2 - 1); }
    bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == n1 - 1 || j == n2 - 1; }
    Vec2 position(int i, int j) const { return {i * d1(), j * d2()}; }
    GridTriangle triangle(int t) const;
    //! Index into a nodal array extended by one ghost ring: (i,j) in [-1,n1] x [-1,n2].
    int ghost_node(int i, int j) const { return (i + 1) + (n1 + 2) * (j + 1); }
    int ghost_node_count() const { return (n1 + 2) * (n2 + 2); }
    bool is_ghost(int i, int j) const { return i < 0 || j < 0 || i >= n1 || j >= n2; }
    //! Grid node reflected across the boundary; identity inside. Ghost values are the mirror
    //! value plus a datum offset, which clamps the normal slope by a centered difference.
    std::array<int, 2> ghost_mirror(int i, int j) const;
    void validate() const;
};

//! Periodic grid of n x n cells on Y = [0,1)^2, node (i,j) = i + n*j with wrap-around.
struct MicroGrid {
    int n = 1;
    double d() const { return 1.0 / n; }
    int node(int i, int j) const;
    int node_count() const { return n * n; }
    int triangle_count() const { return 2 * n * n; }
    GridTriangle triangle(int t) const;
};

//! Sparse stencil: value = sum coeff[k] * field[index[k]].
struct Stencil {
    std::vector<int> index;
    std::vector<double> coeff;
    void add(int i, double c) {
        index.push_back(i);
        coeff.push_back(c);
    }
};

//! Second differences of a field stored with a ghost ring for one triangle: d11 and d22 at the
//! triangle's corner node, d12 from the four nodes of its cell.
std::array<Stencil, 3> macro_hessian_stencil(const MacroGrid& g, const GridTriangle& t);
//! Periodic second differences at node (i,j) of a micro field.
std::array<Stencil, 3> micro_hessian_stencil(const MicroGrid& g, int i, int j);

}  // namespace tsplate
