#pragma once

#include <json.hpp>
#include <vector>

#include "tsplate/grids.hpp"

namespace tsplate {

//! Quadratic polynomial c + x*x1 + y*x2 + xx*x1^2 + xy*x1*x2 + yy*x2^2.
struct Quadratic2 {
    double c = 0, x = 0, y = 0, xx = 0, xy = 0, yy = 0;
    double value(const Vec2& p) const { return c + x * p[0] + y * p[1] + xx * p[0] * p[0] + xy * p[0] * p[1] + yy * p[1] * p[1]; }
    Vec2 gradient(const Vec2& p) const { return {x + 2 * xx * p[0] + xy * p[1], y + xy * p[0] + 2 * yy * p[1]}; }
    Sym2 hessian() const { return {2 * xx, 2 * yy, xy}; }
};

//! Piecewise-linear amplitude a(t) through (times[k], amplitudes[k]); constant outside.
struct LoadProgram {
    std::vector<double> times{0, 1};
    std::vector<double> amplitudes{0, 1};
    double operator()(double t) const;
    void validate() const;
};

//! Kirchhoff-Love boundary datum w(t) = a(t) * (w1, w2, w3) with polynomial shapes.
struct BoundaryDatum {
    Quadratic2 w1, w2, w3;
    LoadProgram program;

    //! Rescaled 3D displacement (w1 - x3 d1 w3, w2 - x3 d2 w3, w3) of the shape at unit amplitude.
    Vec3 displacement(const Vec2& x, double x3) const;
    //! Kirchhoff-Love strain of the shape: E(w-bar) - x3 D^2 w3 (bar and hat parts).
    Sym2 membrane_strain(const Vec2& x) const;
    Sym2 curvature_strain() const;  // -D^2 w3
};

BoundaryDatum datum_from_json(const nlohmann::json& j);
nlohmann::json datum_to_json(const BoundaryDatum& d);

//! Kirchhoff-Love displacement: ubar at the mid-plane nodes, u3 at the nodes and one ghost ring.
//! Admissible states have ghost values equal to the mirror value plus the datum's difference.
struct KLState {
    std::vector<Vec2> ubar;
    std::vector<double> u3;

    static KLState zero(const MacroGrid& g);
    //! Nodal values of the datum shape times amplitude, ghost ring included.
    static KLState from_datum(const MacroGrid& g, const BoundaryDatum& w, double amplitude);
};

//! Per-triangle strain: bar = E ubar (linear elements), hat = -D^2 u3 from macro_hessian_stencil.
struct KLStrain {
    std::vector<Sym2> bar, hat;
};

KLStrain kl_strain(const MacroGrid& g, const KLState& u);

}  // namespace tsplate
