#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "tsplate/return_mapping.hpp"

namespace tsplate {

using SpMat = Eigen::SparseMatrix<double>;
using VecX = Eigen::VectorXd;

//! Linear kinematics of one of the plate models. Quadrature points are arranged in columns,
//! each carrying the same set of transverse levels; point (c, q) has flat index c*L + q and
//! weight column_weight(c) * level_weights()[q]. The strain at a point is linear in the free
//! unknowns and in the load amplitude (through prescribed values).
template <int D, int N>
class Discretization {
public:
    using VecD = Eigen::Matrix<double, D, 1>;
    using Field = std::vector<VecD>;

    virtual ~Discretization() = default;

    virtual int free_dofs() const = 0;
    virtual int fixed_dofs() const = 0;
    virtual int columns() const = 0;
    virtual const std::vector<double>& levels() const = 0;
    virtual const std::vector<double>& level_weights() const = 0;
    virtual double column_weight(int c) const = 0;
    virtual const PointLaw<D, N>& law(int c) const = 0;

    int level_count() const { return static_cast<int>(levels().size()); }
    int point_count() const { return columns() * level_count(); }
    double point_weight(int p) const { return column_weight(p / level_count()) * level_weights()[p % level_count()]; }
    const PointLaw<D, N>& point_law(int p) const { return law(p / level_count()); }

    //! Stiffness over the free unknowns: sum of weight * B^T C B.
    virtual SpMat stiffness() const = 0;
    //! Strain at every point for free values u and prescribed values at the given amplitude.
    virtual void strain(const VecX& u, double amplitude, Field& out) const = 0;
    //! Weighted adjoint sum_p weight_p B_p^T s_p split into free and prescribed unknowns.
    virtual void divergence(const Field& s, VecX& r_free, VecX* r_fixed) const = 0;
    //! Strain of the datum extension at unit amplitude (used for the external work).
    virtual void datum_strain(Field& out) const = 0;
};

}  // namespace tsplate
