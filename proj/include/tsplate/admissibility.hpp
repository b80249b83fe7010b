#pragma once

#include <json.hpp>
#include <vector>

#include "tsplate/limit_models.hpp"
#include "tsplate/model_3d.hpp"

namespace tsplate {

//! Max-norm residuals of the kinematic constraints of a state.
struct AdmissibilityReport {
    double interior = 0;    // |E u - e - p| (Frobenius)
    double boundary = 0;    // |u - w| on the Dirichlet part
    double trace = 0;       // |tr p| (of the rescaled plastic strain in 3D)
    double corrector = 0;   // |mean of the correctors| (two-scale states)
    double max() const { return std::max({interior, boundary, trace, corrector}); }
    nlohmann::json to_json() const;
};

//! 3D rescaled model: e and p are the unscaled tensors at the Gauss points, u the nodal
//! displacement; the datum is w at the given amplitude.
AdmissibilityReport admissibility_residual_h(const Model3D& model, const std::vector<Vec3>& u,
                                             const std::vector<Sym3>& e, const std::vector<Sym3>& p,
                                             const BoundaryDatum& w, double amplitude);

//! Same for solver fields: Lambda_h-scaled elastic and plastic strains in Mandel coordinates.
AdmissibilityReport admissibility_residual_h(const Model3D& model, const VecX& u, double amplitude,
                                             const std::vector<Mandel3>& scaled_e,
                                             const std::vector<Mandel3>& scaled_p);

//! Kirchhoff-Love triple with per-triangle moment fields e = (bar, hat), p = (bar, hat).
//! The boundary residual covers ubar and u3 on the boundary nodes and the ghost ring offsets.
AdmissibilityReport admissibility_residual_KL(const MacroGrid& g, const KLState& u, const KLStrain& e,
                                              const KLStrain& p, const BoundaryDatum& w, double amplitude);

//! Two-scale state: the strain rebuilt from the displacement and correctors against E + P.
AdmissibilityReport twoscale_residual(const LimitModel0& model, const TwoScaleState& s, double amplitude);
AdmissibilityReport twoscale_residual(const LimitModelInf& model, const TwoScaleState& s, double amplitude);

}  // namespace tsplate
