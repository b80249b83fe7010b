#pragma once

#include <vector>

#include "tsplate/sym_tensor.hpp"

namespace tsplate {

//! Spacings of a structured nodal grid on the rescaled plate and the thickness parameter.
struct ScaledGradientStencil {
    double dx1 = 1, dx2 = 1, dx3 = 1;
    double h = 1;
};

//! Node counts of a structured grid; node (i,j,k) has flat index i + n1*(j + n2*k).
struct GridShape {
    int n1 = 0, n2 = 0, n3 = 0;
    int size() const { return n1 * n2 * n3; }
    int index(int i, int j, int k) const { return i + n1 * (j + n2 * k); }
};

//! Nodal values of sym[grad' v | (1/h) d3 v]. Centered differences inside, one-sided on
//! the boundary. Throws if an axis has fewer than two nodes or the sizes disagree.
std::vector<Sym3> scaled_sym_gradient(const ScaledGradientStencil& stencil, const GridShape& shape,
                                      const std::vector<Vec3>& v);

}  // namespace tsplate
