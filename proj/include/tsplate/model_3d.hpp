#pragma once

#include <array>
#include <vector>

#include "tsplate/discretization.hpp"
#include "tsplate/grids.hpp"
#include "tsplate/kl_state.hpp"
#include "tsplate/moments.hpp"
#include "tsplate/torus.hpp"

namespace tsplate {

//! Rescaled thin plate on Omega = omega x (-1/2, 1/2): trilinear hexahedra on a structured grid,
//! 2x2x2 Gauss points, strain Lambda_h E u, eps-periodic phases sampled at the Gauss points.
//! Lateral boundary nodes carry the rescaled Kirchhoff-Love datum. Points are the Gauss points,
//! element e = i + (n1-1)*(j + (n2-1)*k), point e*8 + g with g = g1 + 2 g2 + 4 g3.
class Model3D : public Discretization<6, 5> {
public:
    struct Options {
        bool assumed_shear = true;  // transverse shear from edge tying points
    };

    Model3D(const MacroGrid& plane, int layers, double h, double eps, const TorusGeometry& geometry,
            const BoundaryDatum& w, Options options);
    Model3D(const MacroGrid& plane, int layers, double h, double eps, const TorusGeometry& geometry,
            const BoundaryDatum& w)
        : Model3D(plane, layers, h, eps, geometry, w, Options{}) {}

    int free_dofs() const override { return n_free_; }
    int fixed_dofs() const override { return static_cast<int>(fixed_unit_.size()); }
    int columns() const override { return n_elements_ * 8; }
    const std::vector<double>& levels() const override { return levels_; }
    const std::vector<double>& level_weights() const override { return level_weights_; }
    double column_weight(int) const override { return point_weight_; }
    const Law3& law(int c) const override { return laws_[law_id_[c]]; }

    SpMat stiffness() const override;
    void strain(const VecX& u, double amplitude, Field& out) const override;
    void divergence(const Field& s, VecX& r_free, VecX* r_fixed) const override;
    void datum_strain(Field& out) const override;

    double h() const { return h_; }
    double eps() const { return eps_; }
    int layers() const { return nz_; }
    const MacroGrid& plane() const { return plane_; }
    int node_count() const { return plane_.n1 * plane_.n2 * (nz_ + 1); }
    int node(int i, int j, int k) const { return i + plane_.n1 * (j + plane_.n2 * k); }
    Vec3 node_position(int n) const;
    int element_count() const { return n_elements_; }
    Vec3 point_position(int p) const;
    int point_cell(int p) const { return point_cell_[p]; }
    bool lateral(int i, int j) const { return plane_.on_boundary(i, j); }

    //! Nodal displacement for free values u at the given amplitude.
    std::vector<Vec3> displacement(const VecX& u, double amplitude) const;
    //! Free values of a nodal displacement (prescribed nodes ignored).
    VecX free_values(const std::vector<Vec3>& nodal) const;
    //! Symmetrized gradient E u without the rescaling, at every point.
    std::vector<Sym3> unscaled_strain(const std::vector<Vec3>& nodal) const;
    //! Trilinear reconstruction of a point field from the Gauss values of the containing element.
    Mandel3 sample(const Field& values, const Vec2& x, double x3) const;
    SpatialField<Mandel3> sampler(const Field& values) const;

private:
    using BMat = Eigen::Matrix<double, 6, 24>;
    void gather(int e, const VecX& u, const VecX& ufixed, Eigen::Matrix<double, 24, 1>& ue) const;
    std::array<int, 8> element_nodes(int e) const;

    MacroGrid plane_;
    int nz_;
    double h_, eps_;
    Options options_;
    int n_elements_ = 0;
    double point_weight_ = 0;
    std::vector<double> levels_{0.0}, level_weights_{1.0};
    std::array<BMat, 8> b_scaled_, b_plain_;
    std::vector<int> dof_;  // per node*3 + comp: free index, or -1 - fixed index
    int n_free_ = 0;
    VecX fixed_unit_;
    std::vector<Vec3> datum_nodal_;
    std::vector<Law3> laws_;
    std::vector<int> law_id_;
    std::vector<int> point_cell_;
};

}  // namespace tsplate
