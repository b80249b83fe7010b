#pragma once

#include <memory>
#include <vector>

#include "tsplate/kl_state.hpp"
#include "tsplate/matrix_discretization.hpp"
#include "tsplate/moments.hpp"
#include "tsplate/reduced_law.hpp"
#include "tsplate/torus.hpp"

namespace tsplate {

enum class Regime { Gamma0, GammaInf };

//! Unknowns of a two-scale limit model. Corrector groups are the macro triangles (gamma = 0) or
//! the pairs (macro triangle, transverse level) with index t*L + q (gamma = infinity); entry
//! (group, micro node) sits at group*n_Y^2 + node. E and P hold Mandel coordinates per point.
struct TwoScaleState {
    Regime regime = Regime::Gamma0;
    KLState u;
    std::vector<Vec2> mu;
    std::vector<double> kappa;
    std::vector<Vec3> zeta;  // gamma = infinity only, one per group
    Eigen::MatrixXd E, P;
};

//! Shared macro layout: ubar at mid-plane nodes, u3 at nodes plus ghost ring. Boundary values
//! are prescribed by the datum. A ghost unknown holds the prescribed offset from its mirror node.
struct MacroDofs {
    std::vector<std::array<int, 2>> ubar;  // per node
    std::vector<int> u3;                   // per ghost-indexed node
    std::vector<int> mirror;               // per ghost-indexed node: mirror node, itself inside
    void build(const MacroGrid& g, const BoundaryDatum& w, DofTable& dofs, std::vector<double>& datum);
    //! Stencil over ghost-indexed nodes rewritten over u3 unknowns.
    Stencil resolve(const Stencil& s) const;
    //! u3 at all ghost-indexed nodes from values of the u3 unknowns.
    template <class Val>
    std::vector<double> u3_values(Val val) const {
        std::vector<double> out(u3.size());
        for (size_t n = 0; n < u3.size(); ++n)
            out[n] = mirror[n] == static_cast<int>(n) ? val(u3[n]) : val(u3[mirror[n]]) + val(u3[n]);
        return out;
    }
};

//! Role of a free unknown: macro membrane or deflection, micro corrector, transverse multiplier.
enum class DofKind { Membrane, Bending, MicroBar, MicroHat, Transverse };

//! Common interface of the two limit models.
class LimitModel {
public:
    virtual ~LimitModel() = default;
    virtual Regime regime() const = 0;
    const MacroGrid& macro() const { return macro_; }
    const MicroGrid& micro() const { return micro_; }
    const TransverseRule& rule() const { return rule_; }
    const TorusGeometry& geometry() const { return geometry_; }
    const BoundaryDatum& datum() const { return datum_; }
    //! Quadrature points of omega x I x Y matching the discretization's point order.
    const std::vector<ProductPoint>& product_points() const { return points_; }
    //! Micro cell index of the point's fast variable.
    int micro_cell(int point) const { return point_cell_[point]; }
    //! Kind of every free unknown, in free numbering.
    virtual std::vector<DofKind> free_dof_kinds() const = 0;

protected:
    void macro_kinds(const DofTable& dofs, std::vector<DofKind>& out) const;
    LimitModel(const MacroGrid& macro, int transverse_points, const TorusGeometry& geometry, const BoundaryDatum& w);
    MacroGrid macro_;
    MicroGrid micro_;
    TransverseRule rule_;
    TorusGeometry geometry_;
    BoundaryDatum datum_;
    MacroDofs macro_dofs_;
    std::vector<ProductPoint> points_;
    std::vector<int> point_cell_;
};

//! gamma = 0: plane-stress reduced law, strain E ubar + E_y mu - x3 (D^2 u3 + D^2_y kappa) on omega x Y.
class LimitModel0 : public LimitModel {
public:
    LimitModel0(const MacroGrid& macro, int transverse_points, const TorusGeometry& geometry, const BoundaryDatum& w);
    Regime regime() const override { return Regime::Gamma0; }
    const MatrixDiscretization<3, 3>& discretization() const { return disc_; }
    const ReducedLaw& reduced_law(int law_id) const { return reduced_[law_id]; }
    const ReducedLaw& point_reduced_law(int point) const;

    TwoScaleState state(const VecX& u, double amplitude, const std::vector<Mandel2>& P) const;
    void pack(const TwoScaleState& s, VecX& u, VecX& ufixed) const;

    //! Completion A_y E'' of the elastic strain at every point.
    std::vector<Mandel3> completed_strain(const TwoScaleState& s) const;
    std::vector<DofKind> free_dof_kinds() const override;

private:
    MatrixDiscretization<3, 3> disc_;
    std::vector<ReducedLaw> reduced_;
    std::vector<int> mu_id_, kappa_id_;  // [(group*nY2 + node)*2 + comp], [group*nY2 + node]
    DofTable dofs_;
};

//! gamma = infinity: full law, strain embed(E ubar - x3 D^2 u3) + micro block with mu, kappa, zeta on Omega x Y.
class LimitModelInf : public LimitModel {
public:
    LimitModelInf(const MacroGrid& macro, int transverse_points, const TorusGeometry& geometry, const BoundaryDatum& w);
    Regime regime() const override { return Regime::GammaInf; }
    const MatrixDiscretization<6, 5>& discretization() const { return disc_; }

    TwoScaleState state(const VecX& u, double amplitude, const std::vector<Mandel3>& P) const;
    void pack(const TwoScaleState& s, VecX& u, VecX& ufixed) const;
    std::vector<DofKind> free_dof_kinds() const override;

private:
    MatrixDiscretization<6, 5> disc_;
    std::vector<int> mu_id_, kappa_id_, zeta_id_;
    DofTable dofs_;
};

}  // namespace tsplate
