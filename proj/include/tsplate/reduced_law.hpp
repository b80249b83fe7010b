#pragma once

#include "tsplate/material.hpp"

namespace tsplate {

//! Plane-stress reduction of a phase: the minimizing completion A xi of an in-plane strain,
//! the reduced stiffness and the reduced yield set
//! K_r = { sigma : embed(sigma) - (tr sigma / 3) I in K }.
class ReducedLaw {
public:
    //! The optional yield set replaces the phase's own set (used on interface cells).
    explicit ReducedLaw(const MaterialPhase& phase);
    ReducedLaw(const MaterialPhase& phase, const YieldSet& yield);

    //! Completion entries (lambda1, lambda2, lambda3) placed at (13), (23), (33).
    Vec3 lambda(const Sym2& xi) const;
    Sym3 reduction_operator(const Sym2& xi) const;
    double energy(const Sym2& xi) const;
    Sym3 tensor_apply(const Sym2& xi) const;

    //! Reduced stiffness on Mandel2 coordinates; energy(xi) = 0.5 xi^T C_r xi.
    const Mat3& stiffness() const { return c_r_; }
    //! Reduced yield form on Mandel2 coordinates: K_r = { s : s^T M_r s <= 1 }.
    const Mat3& yield_form() const { return m_r_; }
    //! Smallest eigenvalue of 0.5 C_r, a coercivity constant of the reduced energy.
    double coercivity() const;

    double yield_gauge(const Sym2& sigma) const;
    bool yield_contains(const Sym2& sigma) const;
    double dissipation(const Sym2& xi) const;
    //! Stress in K_r attaining the support function in direction xi (zero for xi = 0).
    Sym2 dissipation_maximizer(const Sym2& xi) const;

    //! Bounds r_H |xi| <= H_r(xi) <= R_H |xi|.
    double r_H() const;
    double R_H() const;

    const MaterialPhase& phase() const { return phase_; }

private:
    void build(const YieldSet& yield);

    MaterialPhase phase_;
    Eigen::Matrix<double, 6, 3> a_;  // Mandel2 -> Mandel3 completion operator
    Eigen::Matrix3d lambda_map_;     // Mandel2 -> (lambda1, lambda2, lambda3)
    Mat3 c_r_;
    Mat3 m_r_;
    Mat3 m_r_inv_;
};

//! Map sigma -> embed(sigma) - (tr sigma / 3) I into deviatoric coordinates.
const Eigen::Matrix<double, 5, 3>& reduced_deviator_map();

}  // namespace tsplate
