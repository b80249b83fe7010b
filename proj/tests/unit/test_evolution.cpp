#include <doctest.h>

#include <random>

#include "tsplate/admissibility.hpp"
#include "tsplate/evolution.hpp"
#include "tsplate/limit_models.hpp"
#include "tsplate/model_3d.hpp"

using namespace tsplate;

namespace {

MacroGrid grid(int n) {
    MacroGrid g;
    g.n1 = g.n2 = n;
    return g;
}

BoundaryDatum stretch() {
    BoundaryDatum w;
    w.w1.x = 1;
    w.w2.y = -0.3;
    return w;
}

BoundaryDatum mixed() {
    BoundaryDatum w;
    w.w1 = {0, 1, 0.3, 0, 0, 0};
    w.w2 = {0, 0, -0.4, 0, 0, 0};
    w.w3 = {0, 0, 0, 2.0, 0.5, -1.0};
    return w;
}

TorusGeometry two_phase(double s0, double s1) {
    return TorusGeometry(4, {0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0},
                         {MaterialPhase::isotropic(1, 1, s0), MaterialPhase::isotropic(2, 1.5, s1)});
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n + 1);
    for (int k = 0; k <= n; ++k) v[k] = a + (b - a) * k / n;
    return v;
}

}  // namespace

TEST_CASE("elastic step") {
    const auto geo = TorusGeometry::homogeneous(MaterialPhase::isotropic(1, 1, 1e6), 2);
    const LimitModel0 m(grid(5), 2, geo, stretch());
    Evolution<3, 3> ev(m.discretization(), SolverOptions{});

    ev.initialize(0, 0.0);
    CHECK(ev.u().norm() == 0);
    CHECK(ev.elastic_energy() == 0);

    ev.initialize(0, 0.01);
    const ReducedLaw r(geo.phase(0));
    const double q = r.energy(0.01 * stretch().membrane_strain(Vec2::Zero()));
    CHECK(ev.elastic_energy() == doctest::Approx(q).epsilon(1e-10));
    const auto st = m.state(ev.u(), 0.01, ev.P());
    const MacroGrid& g = m.macro();
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            const Vec2 x = g.position(i, j);
            CHECK((st.u.ubar[g.node(i, j)] - 0.01 * Vec2(x[0], -0.3 * x[1])).norm() <= 1e-12);
        }

    // minimality with a fixed random plastic field
    std::mt19937 rng(1);
    std::normal_distribution<double> nd;
    const auto& d = m.discretization();
    Evolution<3, 3>::Field P(d.point_count());
    for (auto& p : P) p = 0.01 * Mandel2(nd(rng), nd(rng), nd(rng));
    const VecX u = ev.elastic_solve(P, 0.01);
    auto energy = [&](const VecX& v) {
        Evolution<3, 3>::Field T;
        d.strain(v, 0.01, T);
        double e = 0;
        for (int p = 0; p < d.point_count(); ++p) e += d.point_weight(p) * d.point_law(p).energy(T[p] - P[p]);
        return e;
    };
    const double e0 = energy(u);
    for (int k = 0; k < 10; ++k) {
        VecX v = u;
        for (int i = 0; i < v.size(); ++i) v[i] += 1e-3 * nd(rng);
        CHECK(energy(v) >= e0);
    }
}

TEST_CASE("plastic step leaves elastic points untouched") {
    const auto geo = two_phase(1, 2);
    const LimitModel0 m(grid(4), 2, geo, mixed());
    Evolution<3, 3> ev(m.discretization(), SolverOptions{});
    const auto& d = m.discretization();
    Evolution<3, 3>::Field T(d.point_count(), Mandel2(0.01, 0, 0)), P0(d.point_count(), Mandel2::Zero()), P, S;
    ev.plastic_step(T, P0, P, S);
    for (const auto& p : P) CHECK(p.norm() == 0);
    Evolution<3, 3>::Field big(d.point_count(), Mandel2(3, 0, 0));
    ev.plastic_step(big, P0, P, S);
    for (int k = 0; k < d.point_count(); ++k) {
        CHECK(P[k].norm() > 0);
        CHECK(std::abs(d.point_law(k).gauge(S[k]) - 1) <= 1e-10);
    }
}

TEST_CASE("incremental steps") {
    const auto geo = two_phase(0.02, 0.04);
    const LimitModel0 m(grid(5), 2, geo, mixed());
    SolverOptions opt;
    Evolution<3, 3> ev(m.discretization(), opt);
    const double ay = first_yield_amplitude(ev);
    CHECK(ay > 0);

    SUBCASE("stationary load") {
        ev.initialize(0, 0.5 * ay);
        const VecX u0 = ev.u();
        const auto rec = ev.step(1, 0.5 * ay);
        CHECK(rec.converged);
        CHECK(rec.H_inc == 0);
        CHECK(rec.W_cum == 0);
        CHECK((ev.u() - u0).norm() <= 1e-12 * (1 + u0.norm()));
        CHECK(rec.balance <= 1e-14);
    }
    SUBCASE("ramp past yield") {
        const auto t = linspace(0, 1, 20);
        std::vector<double> a(t.size());
        for (size_t k = 0; k < t.size(); ++k) a[k] = 2 * ay * t[k];
        const auto tr = run_evolution(ev, t, a);
        double dprev = 0;
        bool yielded = false;
        for (size_t k = 1; k < tr.rows.size(); ++k) {
            const auto& r = tr.rows[k];
            CHECK(r.converged);
            CHECK(r.monotone);
            CHECK(r.H_inc >= 0);
            CHECK(r.D_cum >= dprev);
            CHECK(r.stability <= 1e-8);
            CHECK(r.equilibrium <= opt.linear_tolerance);
            dprev = r.D_cum;
            // an elastic prediction beyond the yield surface means plastic flow in this step
            if (a[k] > ay * (1 + 1e-9)) yielded = true;
            if (yielded) CHECK(r.H_inc > 1e-12 * r.Q);
            else CHECK(r.H_inc <= 1e-14 * r.Q);
        }
        CHECK(tr.relative_balance() < 0.05);
        const auto s = m.state(ev.u(), a.back(), ev.P());
        CHECK(twoscale_residual(m, s, a.back()).max() <= 1e-10);
    }
}

TEST_CASE("elastic regime balance is exact up to rounding") {
    const auto geo = two_phase(1e6, 2e6);
    const LimitModel0 m(grid(5), 2, geo, mixed());
    Evolution<3, 3> ev(m.discretization(), SolverOptions{});
    const auto t = linspace(0, 1, 7);
    std::vector<double> a(t.size());
    for (size_t k = 0; k < t.size(); ++k) a[k] = std::sin(2 * t[k]);
    const auto tr = run_evolution(ev, t, a);
    for (const auto& r : tr.rows) {
        CHECK(r.H_inc == 0);
        CHECK(r.balance <= 1e-12 * (1 + r.Q));
    }
    // final energy equals the standalone elastic solution
    Evolution<3, 3> ev2(m.discretization(), SolverOptions{});
    ev2.initialize(0, a.back());
    CHECK(tr.rows.back().Q == doctest::Approx(ev2.elastic_energy()).epsilon(1e-12));
}

TEST_CASE("constant datum keeps the trace constant") {
    const LimitModel0 m(grid(4), 2, two_phase(1, 2), mixed());
    Evolution<3, 3> ev(m.discretization(), SolverOptions{});
    const auto t = linspace(0, 1, 4);
    const auto tr = run_evolution(ev, t, std::vector<double>(t.size(), 0.01));
    for (const auto& r : tr.rows) {
        CHECK(r.Q == doctest::Approx(tr.rows[0].Q));
        CHECK(r.D_cum == 0);
        CHECK(r.W_cum == 0);
        CHECK(r.balance == 0);
    }
}

TEST_CASE("two-step consistency") {
    const auto geo = TorusGeometry::homogeneous(MaterialPhase::isotropic(1, 1, 0.05), 1);
    const LimitModel0 m(grid(4), 2, geo, stretch());
    SolverOptions opt;
    opt.tolerance = 1e-13;
    Evolution<3, 3> one(m.discretization(), opt), two(m.discretization(), opt);
    const double ay = first_yield_amplitude(one);
    one.initialize(0, 0);
    const auto r1 = one.step(1, 3 * ay);
    two.initialize(0, 0);
    two.step(1, 3 * ay);
    const auto r2 = two.step(2, 3 * ay);
    CHECK(r1.H_inc > 0);
    CHECK(r2.H_inc <= 1e-12 * r1.H_inc);
    CHECK(r2.Q == doctest::Approx(r1.Q).epsilon(1e-10));
    CHECK(r2.D_cum == doctest::Approx(r1.D_cum).epsilon(1e-10));
}

TEST_CASE("balance residual shrinks under time refinement") {
    const LimitModel0 m(grid(5), 2, two_phase(0.02, 0.04), mixed());
    Evolution<3, 3> probe(m.discretization(), SolverOptions{});
    const double ay = first_yield_amplitude(probe);
    double prev = 0;
    for (int n : {10, 20, 40}) {
        Evolution<3, 3> ev(m.discretization(), SolverOptions{});
        const auto t = linspace(0, 1, n);
        std::vector<double> a(t.size());
        for (size_t k = 0; k < t.size(); ++k) a[k] = 2 * ay * t[k];
        const double r = run_evolution(ev, t, a).relative_balance();
        if (prev > 0) CHECK(r <= 0.6 * prev);
        prev = r;
    }
}

TEST_CASE("unstable initial states are rejected") {
    const LimitModel0 m(grid(4), 2, two_phase(1, 2), mixed());
    Evolution<3, 3> ev(m.discretization(), SolverOptions{});
    CHECK_THROWS_AS(ev.initialize(0, 100.0), std::runtime_error);
    SolverOptions bad;
    bad.tolerance = 0;
    using Ev2 = Evolution<3, 3>;
    CHECK_THROWS_AS(Ev2(m.discretization(), bad), std::invalid_argument);
    CHECK_THROWS(run_evolution(ev, {0.0}, {0.0}));
}

TEST_CASE("3D model ramp") {
    MacroGrid g = grid(5);
    const Model3D m(g, 2, 0.1, 0.5, two_phase(0.02, 0.04), mixed());
    SolverOptions opt;
    Evolution<6, 5> ev(m, opt);
    const double ay = first_yield_amplitude(ev);
    const auto t = linspace(0, 1, 6);
    std::vector<double> a(t.size());
    for (size_t k = 0; k < t.size(); ++k) a[k] = 2 * ay * t[k];
    const auto tr = run_evolution(ev, t, a);
    for (size_t k = 1; k < tr.rows.size(); ++k) {
        CHECK(tr.rows[k].converged);
        CHECK(tr.rows[k].stability <= 1e-8);
    }
    CHECK(tr.rows.back().D_cum > 0);
    const auto r = admissibility_residual_h(m, ev.u(), a.back(), ev.elastic_strain(), ev.P());
    CHECK(r.max() <= 1e-10);
}
