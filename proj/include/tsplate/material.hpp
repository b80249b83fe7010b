#pragma once

#include <json.hpp>
#include <string>

#include "tsplate/sym_tensor.hpp"

namespace tsplate {

//! Convex yield set in the deviatoric space, stored as the ellipsoid {s : s^T M s <= 1}
//! in the coordinates of deviatoric_basis(). A von Mises ball has M = I / sigma_y^2.
class YieldSet {
public:
    enum class Kind { VonMises, Ellipsoid };

    static YieldSet von_mises(double sigma_y);
    //! Throws unless the form is symmetric positive definite.
    static YieldSet ellipsoid(const Mat5& form);

    Kind kind() const { return kind_; }
    double sigma_y() const { return sigma_y_; }
    const Mat5& form() const { return form_; }
    const Mat5& inverse_form() const { return inverse_form_; }

    //! Gauge sqrt(s^T M s); the set is {gauge <= 1}.
    double gauge(const Dev5& s) const;
    //! Support function sup_{tau in K} tau : xi.
    double support(const Dev5& xi) const;
    //! Largest r with the ball of radius r inside the set, and smallest R with the set inside ball R.
    double inner_radius() const;
    double outer_radius() const;

    //! True when this set is contained in other (up to a relative tolerance).
    bool contained_in(const YieldSet& other, double tol = 1e-12) const;

private:
    Kind kind_ = Kind::VonMises;
    double sigma_y_ = 0;
    Mat5 form_ = Mat5::Identity();
    Mat5 inverse_form_ = Mat5::Identity();
};

//! One phase: deviatoric operator on the deviatoric basis, bulk coefficient k, yield set.
//! The stiffness acts as C xi = C_dev xi_dev + k tr(xi) I.
struct MaterialPhase {
    Mat5 c_dev = 2 * Mat5::Identity();
    double k = 1;
    YieldSet yield = YieldSet::von_mises(1);
    std::string name;

    static MaterialPhase isotropic(double mu, double k, double sigma_y);

    //! Full operator on Mandel3 coordinates.
    Mat6 stiffness() const;
    //! Constants with r_c |xi|^2 <= Q(xi) <= R_c |xi|^2.
    double r_c() const;
    double R_c() const;

    //! Throws std::invalid_argument when the deviatoric block is not SPD or k <= 0.
    void validate() const;
};

MaterialPhase phase_from_json(const nlohmann::json& j);
nlohmann::json phase_to_json(const MaterialPhase& p);

Sym3 elasticity_apply(const MaterialPhase& phase, const Sym3& xi);
double quadratic_energy(const MaterialPhase& phase, const Sym3& xi);

//! Throws std::invalid_argument when tr(sigma_dev) exceeds 1e-10 |sigma_dev|.
bool yield_contains(const MaterialPhase& phase, const Sym3& sigma_dev);

//! Throws unless |tr a| <= tol * |a|.
void require_deviatoric(const Sym3& a, const char* where, double tol = 1e-10);

}  // namespace tsplate
