#include <doctest.h>

#include <cmath>
#include <random>

#include "tsplate/evolution.hpp"
#include "tsplate/stress_check.hpp"

using namespace tsplate;

namespace {

MacroGrid grid(int n) {
    MacroGrid g;
    g.n1 = g.n2 = n;
    return g;
}

BoundaryDatum mixed() {
    BoundaryDatum w;
    w.w1 = {0, 1, 0.3, 0, 0, 0};
    w.w2 = {0, 0, -0.4, 0, 0, 0};
    w.w3 = {0, 0, 0, 2.0, 0.5, -1.0};
    return w;
}

TorusGeometry two_phase() {
    return TorusGeometry(4, {0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0},
                         {MaterialPhase::isotropic(1, 1, 0.02), MaterialPhase::isotropic(2, 1.5, 0.04)});
}

TorusGeometry single_phase(int n = 2) { return TorusGeometry::homogeneous(MaterialPhase::isotropic(1, 1, 0.02), n); }

// sigma_22 = phi''(y1) for a periodic potential phi: a function of the micro column, mean zero
template <class Vec>
std::vector<Vec> column_perturbation(const LimitModel& m, double scale) {
    const int n = m.micro().n;
    std::vector<Vec> t(m.product_points().size(), Vec::Zero());
    for (size_t p = 0; p < t.size(); ++p) {
        const int i = static_cast<int>(std::floor(m.product_points()[p].y[0] * n));
        t[p][1] = scale * std::cos(2 * M_PI * (i + 0.5) / n);
    }
    return t;
}

template <class Vec>
std::vector<Vec> row_field(const LimitModel& m, double scale) {
    const int n = m.micro().n;
    std::vector<Vec> t(m.product_points().size(), Vec::Zero());
    for (size_t p = 0; p < t.size(); ++p) {
        const int j = static_cast<int>(std::floor(m.product_points()[p].y[1] * n));
        t[p][1] = scale * std::cos(2 * M_PI * (j + 0.5) / n);
    }
    return t;
}

template <int D, int N>
EvolutionTrace ramp(Evolution<D, N>& ev, int steps, double factor) {
    const double ay = first_yield_amplitude(ev);
    std::vector<double> t(steps + 1), a(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        t[k] = double(k) / steps;
        a[k] = factor * ay * t[k];
    }
    return run_evolution(ev, t, a);
}

}  // namespace

TEST_CASE("stress field") {
    const LimitModel0 m(grid(4), 2, single_phase(), mixed());
    const auto& d = m.discretization();
    std::vector<Mandel2> E(d.point_count(), Mandel2::Zero());
    for (const auto& s : stress_field(d, E)) CHECK(s.norm() == 0);

    // single phase, identity strain: diag(18/7, 18/7) with vanishing transverse entries
    E.assign(d.point_count(), Sym2::identity().mandel());
    const auto s2 = stress_field(d, E);
    const auto s3 = completed_stress(m, E);
    for (int p = 0; p < d.point_count(); ++p) {
        CHECK(s2[p][0] == doctest::Approx(18.0 / 7).epsilon(1e-13));
        CHECK(s2[p][1] == doctest::Approx(18.0 / 7).epsilon(1e-13));
        CHECK(std::abs(s2[p][2]) <= 1e-14);
        CHECK(std::abs(s3[p].a33) <= 1e-14);
        CHECK(s3[p].a13 == 0);
        CHECK(s3[p].a23 == 0);
        CHECK((minor2(s3[p]).mandel() - s2[p]).norm() <= 1e-13);
    }

    // two phases: one stress value per phase
    const LimitModel0 m2(grid(4), 2, two_phase(), mixed());
    const auto& d2 = m2.discretization();
    E.assign(d2.point_count(), Mandel2(0.3, -0.1, 0.2));
    const auto s = stress_field(d2, E);
    std::map<int, Mandel2> by_phase;
    for (int p = 0; p < d2.point_count(); ++p) {
        const int ph = m2.geometry().phase_of_cell(m2.micro_cell(p));
        if (!by_phase.count(ph)) by_phase[ph] = s[p];
        CHECK((s[p] - by_phase[ph]).norm() == 0);
    }
    CHECK(by_phase.size() == 2);
    CHECK((by_phase[0] - by_phase[1]).norm() > 0.1);
}

TEST_CASE("constant admissible stress") {
    const LimitModel0 m0(grid(5), 2, single_phase(3), mixed());
    std::vector<Mandel2> s0(m0.discretization().point_count(), Mandel2(0.01, -0.004, 0.003));
    const auto r0 = khom_residuals(m0, s0);
    CHECK(r0.residuals.size() == 6);
    for (const auto& [name, v] : r0.residuals) {
        INFO(name);
        CHECK(v <= 1e-13);
    }

    const LimitModelInf m1(grid(4), 2, single_phase(3), mixed());
    std::vector<Mandel3> s1(m1.discretization().point_count(), Sym3{0.01, -0.004, 0, 0.002, 0, 0}.mandel());
    const auto r1 = khom_residuals(m1, s1);
    CHECK(r1.residuals.size() == 5);
    for (const auto& [name, v] : r1.residuals) {
        INFO(name);
        CHECK(v <= 1e-13);
    }

    // transverse stress with nonzero cell mean breaks the sigma_i3 condition only
    for (auto& v : s1) v[4] = 0.01;
    const auto r2 = khom_residuals(m1, s1);
    CHECK(r2.residuals.at("sigma_i3") > 0.1);
    CHECK(r2.residuals.at("div_y Sigma") <= 1e-13);
}

TEST_CASE("stream potential perturbation is micro divergence free") {
    const LimitModel0 m0(grid(4), 2, two_phase(), mixed());
    const auto r0 = khom_residuals(m0, column_perturbation<Mandel2>(m0, 1.0));
    CHECK(r0.residuals.at("div_y Sigma_bar") <= 1e-13);
    CHECK(r0.residuals.at("div_y div_y Sigma_hat") <= 1e-13);
    CHECK(r0.residuals.at("div_x sigma_bar") <= 1e-13);
    CHECK(r0.residuals.at("div_x div_x sigma_hat") <= 1e-13);
    const auto bad0 = khom_residuals(m0, row_field<Mandel2>(m0, 1.0));
    CHECK(bad0.residuals.at("div_y Sigma_bar") > 0.1);

    const LimitModelInf m1(grid(4), 2, two_phase(), mixed());
    const auto r1 = khom_residuals(m1, column_perturbation<Mandel3>(m1, 1.0));
    CHECK(r1.residuals.at("div_y Sigma") <= 1e-13);
    CHECK(r1.residuals.at("sigma_i3") <= 1e-13);
    const auto bad1 = khom_residuals(m1, row_field<Mandel3>(m1, 1.0));
    CHECK(bad1.residuals.at("div_y Sigma") > 0.1);
}

TEST_CASE("solver stresses are admissible") {
    SolverOptions opt;
    SUBCASE("gamma 0") {
        const LimitModel0 m(grid(5), 2, two_phase(), mixed());
        Evolution<3, 3> ev(m.discretization(), opt);
        const auto tr = ramp(ev, 8, 2.0);
        CHECK(tr.all_converged());
        const auto r = khom_residuals(m, ev.stress());
        CHECK(r.max() <= 10 * opt.linear_tolerance);
        CHECK(r.worst_gauge == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(r.location.size() == 5);
    }
    SUBCASE("gamma infinity") {
        const LimitModelInf m(grid(4), 2, two_phase(), mixed());
        Evolution<6, 5> ev(m.discretization(), opt);
        const auto tr = ramp(ev, 6, 2.0);
        CHECK(tr.all_converged());
        CHECK(khom_residuals(m, ev.stress()).max() <= 10 * opt.linear_tolerance);
    }
    SUBCASE("3D") {
        const Model3D m(grid(5), 2, 0.1, 0.5, two_phase(), mixed());
        Evolution<6, 5> ev(m, opt);
        const auto tr = ramp(ev, 4, 2.0);
        CHECK(tr.all_converged());
        const auto r = kh_residuals(m, ev.stress());
        CHECK(r.residuals.size() == 2);
        CHECK(r.max() <= 10 * opt.linear_tolerance);
        CHECK(r.location.size() == 3);
    }
}

TEST_CASE("plastic work slack, gamma 0") {
    const LimitModel0 m(grid(5), 2, two_phase(), mixed());
    const auto& d = m.discretization();
    auto chk = stress_checker(m);
    Evolution<3, 3> ev(d, SolverOptions{});

    // elastic state with its own stress: both sides vanish
    const double ay = first_yield_amplitude(ev);
    ev.initialize(0, 0.5 * ay);
    const double q = ev.elastic_energy();
    CHECK(std::abs(chk.slack(ev.stress(), ev.u(), ev.amplitude(), ev.P())) <= 1e-10 * q);

    // plastified state
    const auto tr = ramp(ev, 10, 3.0);
    const auto& P = ev.P();
    double H = 0;
    for (int p = 0; p < d.point_count(); ++p) H += d.point_weight(p) * d.point_law(p).dissipation(P[p]);
    CHECK(H > 0);
    const double scale = tr.rows.back().Q + H;
    const std::vector<Mandel2> zero(d.point_count(), Mandel2::Zero());
    CHECK(chk.slack(zero, ev.u(), ev.amplitude(), P) == doctest::Approx(H).epsilon(1e-12));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ud(0.2, 1.0);
    double lo = 1e300;
    for (int k = 0; k < 20; ++k) {
        auto s = chk.sample(rng, ud(rng));
        CHECK(khom_residuals(m, s).max() <= 1e-12);
        lo = std::min(lo, chk.slack(s, ev.u(), ev.amplitude(), P));
        // convex combination with the solver stress stays admissible
        const double t = ud(rng);
        for (int p = 0; p < d.point_count(); ++p) s[p] = t * ev.stress()[p] + (1 - t) * s[p];
        lo = std::min(lo, chk.slack(s, ev.u(), ev.amplitude(), P));
    }
    CHECK(lo >= -1e-8 * scale);

    // a raw random field is rejected
    std::normal_distribution<double> nd;
    std::vector<Mandel2> raw(d.point_count());
    for (auto& v : raw) v = 0.001 * Mandel2(nd(rng), nd(rng), nd(rng));
    CHECK_THROWS_AS(chk.slack(raw, ev.u(), ev.amplitude(), P), std::invalid_argument);
}

TEST_CASE("plastic work slack, gamma infinity") {
    const LimitModelInf m(grid(4), 2, two_phase(), mixed());
    const auto& d = m.discretization();
    auto chk = stress_checker(m);
    Evolution<6, 5> ev(d, SolverOptions{});
    const auto tr = ramp(ev, 6, 3.0);
    double H = 0;
    for (int p = 0; p < d.point_count(); ++p) H += d.point_weight(p) * d.point_law(p).dissipation(ev.P()[p]);
    CHECK(H > 0);
    std::mt19937_64 rng(11);
    double lo = 1e300;
    for (int k = 0; k < 20; ++k) {
        const auto s = chk.sample(rng, 1.0);
        CHECK(khom_residuals(m, s).max() <= 1e-12);
        lo = std::min(lo, chk.slack(s, ev.u(), ev.amplitude(), ev.P()));
    }
    CHECK(lo >= -1e-8 * (tr.rows.back().Q + H));
}

TEST_CASE("solver stress attains the plastic work bound") {
    const LimitModel0 m(grid(5), 2, two_phase(), mixed());
    const auto& d = m.discretization();
    Evolution<3, 3> ev(d, SolverOptions{});
    const double ay = first_yield_amplitude(ev);
    ev.initialize(0, 0);
    int plastic_steps = 0;
    for (int k = 1; k <= 8; ++k) {
        const auto P0 = ev.P();
        const auto rec = ev.step(k, 0.3 * k * ay);
        if (rec.H_inc <= 0) continue;
        ++plastic_steps;
        Evolution<3, 3>::Field dP(P0.size());
        for (size_t p = 0; p < dP.size(); ++p) dP[p] = ev.P()[p] - P0[p];
        CHECK(hill_gap(d, ev.stress(), dP) <= 1e-10);
    }
    CHECK(plastic_steps >= 4);
}

TEST_CASE("slack is unchanged by a micro divergence-free perturbation") {
    const LimitModel0 m(grid(5), 2, single_phase(4), mixed());
    const auto& d = m.discretization();
    auto chk = stress_checker(m);
    Evolution<3, 3> ev(d, SolverOptions{});
    const auto tr = ramp(ev, 6, 3.0);
    std::mt19937_64 rng(3);
    auto s = chk.sample(rng, 0.5);
    const double before = chk.slack(s, ev.u(), ev.amplitude(), ev.P());
    const auto tau = column_perturbation<Mandel2>(m, 0.1 * 0.02);
    for (size_t p = 0; p < s.size(); ++p) s[p] += tau[p];
    CHECK(chk.max_gauge(s) < 1);
    const double after = chk.slack(s, ev.u(), ev.amplitude(), ev.P());
    CHECK(std::abs(after - before) <= 1e-10 * (tr.rows.back().Q + std::abs(before)));
}

TEST_CASE("stress report json") {
    StressReport r;
    r.residuals["yield"] = 0;
    r.residuals["div_y Sigma"] = 2e-12;
    r.slack = {0.5, 0.1, 0.3};
    const auto j = r.to_json();
    CHECK(j["max_residual"].get<double>() == 2e-12);
    CHECK(j["slack"]["min"].get<double>() == 0.1);
    CHECK(j["slack"]["count"].get<int>() == 3);
    CHECK(j["residuals"]["yield"].get<double>() == 0);
}
