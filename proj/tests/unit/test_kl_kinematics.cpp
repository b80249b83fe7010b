#include <doctest.h>

#include <random>

#include "tsplate/admissibility.hpp"
#include "tsplate/evolution.hpp"
#include "tsplate/kl_state.hpp"
#include "tsplate/limit_models.hpp"

using namespace tsplate;

namespace {

MacroGrid grid(int n1, int n2, double a = 1, double b = 1) {
    MacroGrid g;
    g.a = a;
    g.b = b;
    g.n1 = n1;
    g.n2 = n2;
    return g;
}

BoundaryDatum bending_datum() {
    BoundaryDatum w;
    w.w1 = {0.01, 0.2, -0.1, 0, 0, 0};
    w.w2 = {0, 0.05, 0.3, 0, 0, 0};
    w.w3 = {0.1, 0.02, -0.03, 0.5, -0.2, 0.35};
    return w;
}

TorusGeometry checker(int n, double s0 = 1, double s1 = 2) {
    std::vector<int> raster(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) raster[j * n + i] = (i < n / 2) != (j < n / 2);
    return TorusGeometry(n, raster, {MaterialPhase::isotropic(1, 1, s0), MaterialPhase::isotropic(2, 1.5, s1)});
}

}  // namespace

TEST_CASE("kl_strain on polynomial fields") {
    const MacroGrid g = grid(6, 5, 1.0, 0.8);
    BoundaryDatum w;
    w.w3.xx = 0.5;
    w.w3.yy = 0.5;
    KLState s = KLState::from_datum(g, w, 1.0);
    KLStrain e = kl_strain(g, s);
    for (int t = 0; t < g.triangle_count(); ++t) {
        CHECK(e.hat[t].a11 == doctest::Approx(-1));
        CHECK(e.hat[t].a22 == doctest::Approx(-1));
        CHECK(std::abs(e.hat[t].a12) <= 1e-12);
        CHECK(e.bar[t].norm() == 0);
    }
    BoundaryDatum id;
    id.w1.x = 1;
    id.w2.y = 1;
    e = kl_strain(g, KLState::from_datum(g, id, 1.0));
    for (int t = 0; t < g.triangle_count(); ++t) CHECK((e.bar[t] - Sym2::identity()).norm() <= 1e-12);
    BoundaryDatum rot;
    rot.w1.y = -1;
    rot.w2.x = 1;
    e = kl_strain(g, KLState::from_datum(g, rot, 1.0));
    for (int t = 0; t < g.triangle_count(); ++t) CHECK(e.bar[t].norm() <= 1e-12);
    // general quadratic: exact Hessian including the mixed term
    const BoundaryDatum q = bending_datum();
    e = kl_strain(g, KLState::from_datum(g, q, 2.0));
    for (int t = 0; t < g.triangle_count(); ++t) {
        CHECK((e.hat[t] - 2.0 * q.curvature_strain()).norm() <= 1e-10);
        CHECK((e.bar[t] - 2.0 * q.membrane_strain(g.triangle(t).centroid)).norm() <= 1e-12);
    }
    KLState bad = s;
    bad.u3.pop_back();
    CHECK_THROWS(kl_strain(g, bad));
}

TEST_CASE("admissibility_residual_KL") {
    const MacroGrid g = grid(5, 5);
    const BoundaryDatum w = bending_datum();
    const KLState u = KLState::from_datum(g, w, 1.5);
    const KLStrain e = kl_strain(g, u);
    KLStrain p;
    p.bar.assign(g.triangle_count(), Sym2{});
    p.hat = p.bar;
    CHECK(admissibility_residual_KL(g, u, e, p, w, 1.5).max() <= 1e-12);

    // u3 with curvature not matching e-hat
    KLState v = u;
    BoundaryDatum bump = w;
    bump.w3.xx += 0.25;  // D^2 changes by diag(0.5, 0)
    v.u3 = KLState::from_datum(g, bump, 1.5).u3;
    const auto r = admissibility_residual_KL(g, v, e, p, w, 1.5);
    CHECK(r.interior == doctest::Approx(1.5 * 0.5));
    CHECK(r.boundary > 0);

    KLStrain e2 = e;
    for (auto& x : e2.bar) x += Sym2{0.1, 0, 0};
    CHECK(admissibility_residual_KL(g, u, e2, p, w, 1.5).interior == doctest::Approx(0.1));
}

TEST_CASE("limit models: summation by parts and exact patches") {
    const BoundaryDatum w = bending_datum();
    for (int n : {4, 6, 7, 9}) {
        const MacroGrid g = grid(n, n + 1, 1.0, 1.2);
        const auto geo = TorusGeometry::homogeneous(MaterialPhase::isotropic(1, 1, 100), 3);
        const LimitModel0 m0(g, 2, geo, w);
        const auto& d = m0.discretization();

        // constant stresses are in discrete equilibrium at every free unknown
        std::vector<Mandel2> s(d.point_count(), Mandel2(0.7, -1.1, 0.4));
        for (int p = 0; p < d.point_count(); ++p) s[p] += d.levels()[p % d.level_count()] * Mandel2(2.0, 0.3, -0.9);
        VecX rf, rd;
        d.divergence(s, rf, &rd);
        CHECK(rf.cwiseAbs().maxCoeff() <= 1e-11 * rd.cwiseAbs().maxCoeff());

        // the elastic solution for a quadratic datum is the datum itself
        Evolution<3, 3> ev(d, SolverOptions{});
        ev.initialize(0, 1.0);
        const auto st = m0.state(ev.u(), 1.0, ev.P());
        const KLState exact = KLState::from_datum(g, w, 1.0);
        double err = 0;
        for (int k = 0; k < g.node_count(); ++k) err = std::max(err, (st.u.ubar[k] - exact.ubar[k]).norm());
        for (int k = 0; k < g.ghost_node_count(); ++k) err = std::max(err, std::abs(st.u.u3[k] - exact.u3[k]));
        CHECK(err <= 1e-10);
        for (int k = 0; k < d.point_count(); ++k) {
            const auto& pt = m0.product_points()[k];
            const Mandel2 want = (w.membrane_strain(pt.x) + pt.x3 * w.curvature_strain()).mandel();
            CHECK((st.E.row(k).transpose() - want).norm() <= 1e-9);
        }
        CHECK(twoscale_residual(m0, st, 1.0).max() <= 1e-10);
    }
}

TEST_CASE("limit models: stiffness is definite on many grid sizes") {
    const BoundaryDatum w = bending_datum();
    for (int n : {3, 4, 5, 6, 9}) {
        for (int ny : {1, 2, 3, 4, 6}) {
            const MacroGrid g = grid(n, n);
            const auto geo = checker(ny == 1 ? 2 : ny);
            const LimitModel0 m0(g, 2, ny == 1 ? TorusGeometry::homogeneous(MaterialPhase::isotropic(1, 1, 1), 1) : geo, w);
            SpdSolver s(LinearSolverKind::Cholesky, 1e-12);
            CHECK_NOTHROW(s.factor(m0.discretization().stiffness()));
            const Eigen::MatrixXd k = Eigen::MatrixXd(m0.discretization().stiffness()).selfadjointView<Eigen::Lower>();
            if (k.rows() > 0 && k.rows() < 1500) {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
                CHECK(es.eigenvalues()[0] > 1e-10 * es.eigenvalues()[k.rows() - 1]);
            }
        }
    }
    for (int ny : {2, 3}) {
        const LimitModelInf mi(grid(4, 4), 2, checker(ny), w);
        SpdSolver s(LinearSolverKind::Cholesky, 1e-12);
        CHECK_NOTHROW(s.factor(mi.discretization().stiffness()));
        const Eigen::MatrixXd k = Eigen::MatrixXd(mi.discretization().stiffness()).selfadjointView<Eigen::Lower>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()[0] > 1e-10 * es.eigenvalues()[k.rows() - 1]);
    }
}

TEST_CASE("two-scale residual of constructed states") {
    const MacroGrid g = grid(4, 5);
    const BoundaryDatum w = bending_datum();
    std::mt19937 rng(3);
    std::normal_distribution<double> n;
    {
        const LimitModel0 m(g, 3, checker(4), w);
        const auto& d = m.discretization();
        VecX u(d.free_dofs());
        for (int k = 0; k < u.size(); ++k) u[k] = n(rng);
        std::vector<Mandel2> P(d.point_count());
        for (auto& p : P) p = Mandel2(n(rng), n(rng), n(rng));
        const auto s = m.state(u, 0.7, P);
        CHECK(twoscale_residual(m, s, 0.7).max() <= 1e-10);
        auto t = s;
        t.E(3, 1) += 0.25;
        CHECK(twoscale_residual(m, t, 0.7).interior == doctest::Approx(0.25));
        t = s;
        t.u.ubar[0][0] += 0.1;  // corner node is on the boundary
        CHECK(twoscale_residual(m, t, 0.7).boundary == doctest::Approx(0.1));
    }
    {
        const LimitModelInf m(g, 2, checker(2), w);
        const auto& d = m.discretization();
        VecX u(d.free_dofs());
        for (int k = 0; k < u.size(); ++k) u[k] = n(rng);
        std::vector<Mandel3> P(d.point_count());
        for (auto& p : P) p = deviatoric_basis() * Dev5::Random();
        const auto s = m.state(u, 1.3, P);
        CHECK(twoscale_residual(m, s, 1.3).max() <= 1e-10);
        // single phase, no correctors, E = E u, P = 0
        const LimitModelInf m1(g, 2, TorusGeometry::homogeneous(MaterialPhase::isotropic(1, 1, 1), 2), w);
        std::vector<Mandel3> P0(m1.discretization().point_count(), Mandel3::Zero());
        VecX u0 = VecX::Zero(m1.discretization().free_dofs());
        auto s0 = m1.state(u0, 0.0, P0);
        CHECK(twoscale_residual(m1, s0, 0.0).max() == 0);
    }
}

TEST_CASE("limit models reject unordered phases") {
    Mat5 a = Mat5::Identity(), b = Mat5::Identity();
    a(0, 0) = 4;
    b(1, 1) = 4;
    MaterialPhase p0 = MaterialPhase::isotropic(1, 1, 1), p1 = p0;
    p0.yield = YieldSet::ellipsoid(a);
    p1.yield = YieldSet::ellipsoid(b);
    const TorusGeometry geo(2, {0, 1, 1, 0}, {p0, p1});
    CHECK_THROWS_AS(LimitModel0(grid(4, 4), 2, geo, bending_datum()), std::invalid_argument);
    CHECK_THROWS_AS(LimitModel0(grid(4, 4), 1, TorusGeometry::homogeneous(p0), bending_datum()), std::invalid_argument);
    CHECK_THROWS_AS(LimitModel0(grid(2, 4), 2, TorusGeometry::homogeneous(p0), bending_datum()), std::invalid_argument);
}
