#include "tsplate/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "tsplate/admissibility.hpp"
#include "tsplate/field_io.hpp"
#include "tsplate/model_3d.hpp"
#include "tsplate/reduced_law.hpp"
#include "tsplate/stress_check.hpp"

namespace tsplate {

namespace fs = std::filesystem;
using nlohmann::json;

std::string model_name(ModelKind k) {
    switch (k) {
        case ModelKind::Gamma0: return "gamma0";
        case ModelKind::GammaInf: return "gamma_inf";
        case ModelKind::Plate3D: return "3d";
    }
    return "?";
}

// ---------------------------------------------------------------------------------------------
// schema

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw SchemaError(where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw SchemaError("unknown key \"" + it.key() + "\" in " + where);
}

template <class T>
T field(const json& j, const char* key, const std::string& where, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(where + "." + key + " has the wrong type");
    }
}

Regime regime_from(const std::string& s) {
    if (s == "gamma0") return Regime::Gamma0;
    if (s == "gamma_inf") return Regime::GammaInf;
    throw SchemaError("regime must be \"gamma0\" or \"gamma_inf\", got \"" + s + "\"");
}

std::vector<double> parse_times(const json& t) {
    check_keys(t, "time", {"times", "steps", "start", "end"});
    std::vector<double> times;
    if (t.contains("times")) {
        if (t.contains("steps")) throw SchemaError("time: give either \"times\" or \"steps\"");
        times = field<std::vector<double>>(t, "times", "time", {});
    } else {
        const int n = field<int>(t, "steps", "time", 0);
        const double t0 = field<double>(t, "start", "time", 0.0), t1 = field<double>(t, "end", "time", 1.0);
        if (n < 1) throw SchemaError("time.steps must be at least 1");
        if (!(t1 > t0)) throw SchemaError("time.end must exceed time.start");
        for (int k = 0; k <= n; ++k) times.push_back(t0 + (t1 - t0) * k / n);
    }
    if (times.size() < 2) throw SchemaError("time partition needs at least two points");
    for (size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw SchemaError("time partition must be strictly increasing");
    return times;
}

SolverOptions parse_solver(const json& j) {
    check_keys(j, "solver", {"tolerance", "max_iterations", "linear_tolerance", "linear", "accelerate"});
    SolverOptions o;
    o.tolerance = field<double>(j, "tolerance", "solver", o.tolerance);
    o.max_iterations = field<int>(j, "max_iterations", "solver", o.max_iterations);
    o.linear_tolerance = field<double>(j, "linear_tolerance", "solver", o.linear_tolerance);
    o.accelerate = field<bool>(j, "accelerate", "solver", o.accelerate);
    if (j.contains("linear")) {
        try {
            o.linear = linear_solver_from_string(field<std::string>(j, "linear", "solver", ""));
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("solver.linear: ") + e.what());
        }
    }
    if (!(o.tolerance > 0) || !(o.linear_tolerance > 0) || o.max_iterations < 1)
        throw SchemaError("solver tolerances and iteration cap must be positive");
    return o;
}

Plate3DConfig parse_plate3d(const json& j) {
    check_keys(j, "plate_3d", {"h", "eps", "regime", "layers", "cells_per_period", "cells_x2", "assumed_shear"});
    Plate3DConfig c;
    c.h = field<double>(j, "h", "plate_3d", c.h);
    c.eps = field<double>(j, "eps", "plate_3d", c.eps);
    c.regime = regime_from(field<std::string>(j, "regime", "plate_3d", "gamma0"));
    c.layers = field<int>(j, "layers", "plate_3d", c.layers);
    if (j.contains("cells_per_period")) {
        const auto& v = j.at("cells_per_period");
        if (v.is_number_integer()) {
            c.cells_per_period[0] = c.cells_per_period[1] = v.get<int>();
        } else if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
            c.cells_per_period[0] = v[0].get<int>();
            c.cells_per_period[1] = v[1].get<int>();
        } else {
            throw SchemaError("plate_3d.cells_per_period must be an integer or a pair of integers");
        }
    }
    c.cells_x2 = field<int>(j, "cells_x2", "plate_3d", 0);
    c.assumed_shear = field<bool>(j, "assumed_shear", "plate_3d", true);
    if (!(c.h > 0)) throw SchemaError("plate_3d.h must be positive");
    if (c.layers < 1 || c.cells_per_period[0] < 1 || c.cells_per_period[1] < 1 || c.cells_x2 < 0)
        throw SchemaError("plate_3d cell counts must be positive");
    return c;
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::string& base_dir) {
    check_keys(j, "scenario",
               {"name", "model", "geometry", "plate", "plate_3d", "load", "time", "solver", "seed", "verify", "output"});
    for (const char* key : {"model", "geometry", "load", "time"})
        if (!j.contains(key)) throw SchemaError(std::string("scenario is missing \"") + key + "\"");
    Scenario s;
    s.name = field<std::string>(j, "name", "scenario", "scenario");
    const std::string model = field<std::string>(j, "model", "scenario", "");
    if (model == "gamma0") s.model = ModelKind::Gamma0;
    else if (model == "gamma_inf") s.model = ModelKind::GammaInf;
    else if (model == "3d") s.model = ModelKind::Plate3D;
    else throw SchemaError("model must be \"gamma0\", \"gamma_inf\" or \"3d\", got \"" + model + "\"");

    try {
        const auto& g = j.at("geometry");
        if (g.is_string()) {
            fs::path p = g.get<std::string>();
            if (p.is_relative()) p = fs::path(base_dir) / p;
            s.geometry = TorusGeometry::load(p.string());
        } else {
            s.geometry = TorusGeometry::from_json(g);
        }
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("geometry: ") + e.what());
    }

    if (j.contains("plate")) {
        const auto& p = j.at("plate");
        check_keys(p, "plate", {"a", "b", "n1", "n2", "transverse_points"});
        s.plate.a = field<double>(p, "a", "plate", 1.0);
        s.plate.b = field<double>(p, "b", "plate", 1.0);
        s.plate.n1 = field<int>(p, "n1", "plate", 9);
        s.plate.n2 = field<int>(p, "n2", "plate", 9);
        s.transverse_points = field<int>(p, "transverse_points", "plate", 3);
    } else {
        s.plate.n1 = s.plate.n2 = 9;
    }
    if (!(s.plate.a > 0) || !(s.plate.b > 0) || s.plate.n1 < 3 || s.plate.n2 < 3)
        throw SchemaError("plate needs positive extents and at least 3 nodes per direction");
    if (s.transverse_points < 2) throw SchemaError("plate.transverse_points must be at least 2");
    if (j.contains("plate_3d")) s.plate3d = parse_plate3d(j.at("plate_3d"));

    try {
        json load = j.at("load");
        if (!load.is_object()) throw SchemaError("load must be an object");
        const std::string unit = field<std::string>(load, "unit", "load", "absolute");
        if (unit == "first_yield") s.amplitude_in_first_yield = true;
        else if (unit != "absolute") throw SchemaError("load.unit must be \"absolute\" or \"first_yield\"");
        load.erase("unit");
        check_keys(load, "load", {"w1", "w2", "w3", "program"});
        s.load = datum_from_json(load);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("load: ") + e.what());
    } catch (const json::exception& e) {
        throw SchemaError(std::string("load: ") + e.what());
    }

    s.times = parse_times(j.at("time"));
    if (j.contains("solver")) s.solver = parse_solver(j.at("solver"));
    s.seed = field<std::uint64_t>(j, "seed", "scenario", 1);
    if (j.contains("verify")) {
        check_keys(j.at("verify"), "verify", {"stress_samples", "every"});
        s.stress_samples = field<int>(j.at("verify"), "stress_samples", "verify", 20);
        s.sample_every = field<int>(j.at("verify"), "every", "verify", 0);
        if (s.stress_samples < 0 || s.sample_every < 0) throw SchemaError("verify counts must be nonnegative");
    }
    if (j.contains("output")) {
        check_keys(j.at("output"), "output", {"vtk"});
        s.vtk = field<bool>(j.at("output"), "vtk", "output", false);
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scenario file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("scenario file " + path + " is not valid JSON: " + e.what());
    }
    auto s = scenario_from_json(j, fs::path(path).parent_path().string());
    if (!j.contains("name")) s.name = fs::path(path).stem().string();
    return s;
}

double default_eps(Regime regime, double h) {
    if (!(h > 0)) throw std::invalid_argument("h must be positive");
    return regime == Regime::Gamma0 ? std::sqrt(h) : h * h;
}

double aligned_eps(double a, double eps) {
    if (!(eps > 0) || !(a > 0)) throw std::invalid_argument("eps and the plate extent must be positive");
    return a / std::max(1.0, std::round(a / eps));
}

MacroGrid plane_grid_3d(const Scenario& s, double eps) {
    MacroGrid g;
    g.a = s.plate.a;
    g.b = s.plate.b;
    const auto& c = s.plate3d;
    g.n1 = static_cast<int>(std::lround(g.a / eps)) * c.cells_per_period[0] + 1;
    g.n2 = c.cells_x2 > 0 ? c.cells_x2 + 1
                         : static_cast<int>(std::max(1L, std::lround(g.b / eps))) * c.cells_per_period[1] + 1;
    return g;
}

// ---------------------------------------------------------------------------------------------
// model adapters

namespace {

//! Model-specific views needed by the generic run loop.
template <int D, int N>
struct Adapter {
    using Field = typename Discretization<D, N>::Field;
    const Discretization<D, N>* disc = nullptr;
    std::function<AdmissibilityReport(const VecX& u, double a, const Field& P)> admissible;
    std::function<StressReport(StressChecker<D, N>&, const Field&)> stress;
    std::function<StressChecker<D, N>()> checker;
    std::function<std::vector<ProductPoint>()> points;
    std::function<LatticeData(const VecX& u, double a)> lattice;
};

struct Models {
    std::unique_ptr<LimitModel0> m0;
    std::unique_ptr<LimitModelInf> mi;
    std::unique_ptr<Model3D> m3;
    double eps = 0;
};

Models build(const Scenario& s) {
    Models m;
    switch (s.model) {
        case ModelKind::Gamma0:
            m.m0 = std::make_unique<LimitModel0>(s.plate, s.transverse_points, s.geometry, s.load);
            break;
        case ModelKind::GammaInf:
            m.mi = std::make_unique<LimitModelInf>(s.plate, s.transverse_points, s.geometry, s.load);
            break;
        case ModelKind::Plate3D: {
            const double raw = s.plate3d.eps > 0 ? s.plate3d.eps : default_eps(s.plate3d.regime, s.plate3d.h);
            m.eps = aligned_eps(s.plate.a, raw);
            Model3D::Options o;
            o.assumed_shear = s.plate3d.assumed_shear;
            m.m3 = std::make_unique<Model3D>(plane_grid_3d(s, m.eps), s.plate3d.layers, s.plate3d.h, m.eps, s.geometry,
                                             s.load, o);
            break;
        }
    }
    return m;
}

LatticeData kl_lattice(const LimitModel& m, const KLState& u) {
    const MacroGrid& g = m.macro();
    LatticeData d;
    d.nx = g.n1;
    d.ny = g.n2;
    d.spacing[0] = g.d1();
    d.spacing[1] = g.d2();
    d.names = {"ubar1", "ubar2", "u3"};
    d.arrays.assign(3, std::vector<double>(g.node_count()));
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            const int n = g.node(i, j);
            d.arrays[0][n] = u.ubar[n][0];
            d.arrays[1][n] = u.ubar[n][1];
            d.arrays[2][n] = u.u3[g.ghost_node(i, j)];
        }
    return d;
}

Adapter<3, 3> adapter(const LimitModel0& m) {
    Adapter<3, 3> a;
    a.disc = &m.discretization();
    a.admissible = [&m](const VecX& u, double amp, const Adapter<3, 3>::Field& P) {
        return twoscale_residual(m, m.state(u, amp, P), amp);
    };
    a.stress = [&m](StressChecker<3, 3>& c, const Adapter<3, 3>::Field& s) { return khom_residuals(m, c, s); };
    a.checker = [&m] { return stress_checker(m); };
    a.points = [&m] { return m.product_points(); };
    a.lattice = [&m](const VecX& u, double amp) {
        return kl_lattice(m, m.state(u, amp, std::vector<Mandel2>(m.discretization().point_count(), Mandel2::Zero())).u);
    };
    return a;
}

Adapter<6, 5> adapter(const LimitModelInf& m) {
    Adapter<6, 5> a;
    a.disc = &m.discretization();
    a.admissible = [&m](const VecX& u, double amp, const Adapter<6, 5>::Field& P) {
        return twoscale_residual(m, m.state(u, amp, P), amp);
    };
    a.stress = [&m](StressChecker<6, 5>& c, const Adapter<6, 5>::Field& s) { return khom_residuals(m, c, s); };
    a.checker = [&m] { return stress_checker(m); };
    a.points = [&m] { return m.product_points(); };
    a.lattice = [&m](const VecX& u, double amp) {
        return kl_lattice(m, m.state(u, amp, std::vector<Mandel3>(m.discretization().point_count(), Mandel3::Zero())).u);
    };
    return a;
}

Adapter<6, 5> adapter(const Model3D& m) {
    Adapter<6, 5> a;
    a.disc = &m;
    a.admissible = [&m](const VecX& u, double amp, const Adapter<6, 5>::Field& P) {
        Adapter<6, 5>::Field T;
        m.strain(u, amp, T);
        for (size_t p = 0; p < T.size(); ++p) T[p] -= P[p];
        return admissibility_residual_h(m, u, amp, T, P);
    };
    a.stress = [&m](StressChecker<6, 5>& c, const Adapter<6, 5>::Field& s) { return kh_residuals(m, c, s); };
    a.checker = [&m] { return stress_checker(m); };
    a.points = [&m] {
        std::vector<ProductPoint> pts(m.point_count());
        for (int p = 0; p < m.point_count(); ++p) {
            const Vec3 x = m.point_position(p);
            pts[p] = {Vec2(x[0], x[1]), x[2], Vec2::Zero(), m.point_weight(p)};
        }
        return pts;
    };
    a.lattice = [&m](const VecX& u, double amp) {
        const auto nodal = m.displacement(u, amp);
        LatticeData d;
        d.nx = m.plane().n1;
        d.ny = m.plane().n2;
        d.nz = m.layers() + 1;
        d.origin[2] = -0.5;
        d.spacing[0] = m.plane().d1();
        d.spacing[1] = m.plane().d2();
        d.spacing[2] = 1.0 / m.layers();
        d.names = {"u1", "u2", "u3"};
        d.arrays.assign(3, std::vector<double>(nodal.size()));
        for (size_t n = 0; n < nodal.size(); ++n)
            for (int c = 0; c < 3; ++c) d.arrays[c][n] = nodal[n][c];
        return d;
    };
    return a;
}

template <int D, int N>
double dissipation_of(const Discretization<D, N>& disc, const typename Discretization<D, N>::Field& P) {
    double h = 0;
    for (int p = 0; p < disc.point_count(); ++p) h += disc.point_weight(p) * disc.point_law(p).dissipation(P[p]);
    return h;
}

//! Slack of sampled admissible stresses, every other one mixed with the given stress.
template <int D, int N>
json slack_samples(StressChecker<D, N>& chk, const typename Discretization<D, N>::Field& stress, const VecX& u,
                   double amp, const typename Discretization<D, N>::Field& P, int count, std::mt19937_64& rng,
                   double scale, std::vector<double>* all) {
    std::uniform_real_distribution<double> ud(0.2, 1.0);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    int rejected = 0;
    for (int k = 0; k < count; ++k) {
        auto s = chk.sample(rng, ud(rng));
        if (k % 2 == 1) {
            const double t = ud(rng);
            for (size_t p = 0; p < s.size(); ++p) s[p] = t * stress[p] + (1 - t) * s[p];
        }
        try {
            const double v = chk.slack(s, u, amp, P);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (all) all->push_back(v);
        } catch (const std::invalid_argument&) {
            ++rejected;
        }
    }
    const double ratio = count > rejected ? lo / scale : 0.0;
    return {{"samples", count}, {"rejected", rejected}, {"min", count > rejected ? lo : 0.0},
            {"max", count > rejected ? hi : 0.0}, {"min_over_scale", ratio}, {"scale", scale},
            {"ok", rejected == 0 && ratio >= -1e-8}};
}

template <int D, int N>
json state_json(const Scenario& s, const Evolution<D, N>& ev, double t, double first_yield) {
    json P = json::array();
    for (const auto& p : ev.P()) P.push_back(std::vector<double>(p.data(), p.data() + D));
    return {{"model", model_name(s.model)},
            {"t", t},
            {"amplitude", ev.amplitude()},
            {"first_yield", first_yield},
            {"u", std::vector<double>(ev.u().data(), ev.u().data() + ev.u().size())},
            {"P", P}};
}

template <int D, int N>
RunResult run_with(const Scenario& s, Adapter<D, N> ad, const std::string& out_dir, double eps) {
    using Field = typename Discretization<D, N>::Field;
    const auto& disc = *ad.disc;
    Evolution<D, N> ev(disc, s.solver);
    double unit = 1, ay = 0;
    try {
        ay = first_yield_amplitude(ev);
    } catch (const std::runtime_error&) {
        ay = 0;
    }
    if (s.amplitude_in_first_yield) {
        if (!(ay > 0)) throw SchemaError("load.unit = first_yield needs a datum that produces stress");
        unit = ay;
    }
    auto amp = [&](double t) { return unit * s.load.program(t); };

    auto chk = ad.checker();
    std::mt19937_64 rng(s.seed);
    RunResult res;
    json steps = json::array();
    StressReport summary_stress;

    auto verify = [&](const StepRecord& rec, int k, const Field* P_prev) {
        json row = {{"step", k}, {"t", rec.t}, {"amplitude", rec.amplitude}, {"converged", rec.converged},
                    {"iterations", rec.iterations}, {"restarts", rec.restarts}, {"monotone", rec.monotone},
                    {"stability", rec.stability}, {"equilibrium", rec.equilibrium}};
        row["admissibility"] = ad.admissible(ev.u(), ev.amplitude(), ev.P()).to_json();
        const StressReport sr = ad.stress(chk, ev.stress());
        row["stress"] = sr.to_json();
        for (const auto& [name, v] : sr.residuals)
            summary_stress.residuals[name] = std::max(summary_stress.residuals[name], v);
        if (P_prev && rec.H_inc > 0) {
            Field dP(ev.P().size());
            for (size_t p = 0; p < dP.size(); ++p) dP[p] = ev.P()[p] - (*P_prev)[p];
            row["hill_gap"] = hill_gap(disc, ev.stress(), dP);
        }
        const bool last = k == static_cast<int>(s.times.size()) - 1;
        const bool sample = s.stress_samples > 0 && (last || (s.sample_every > 0 && k > 0 && k % s.sample_every == 0));
        if (sample) {
            const double scale = std::max(rec.Q + rec.D_cum, std::numeric_limits<double>::min());
            row["slack"] = slack_samples(chk, ev.stress(), ev.u(), ev.amplitude(), ev.P(), s.stress_samples, rng, scale,
                                         &summary_stress.slack);
        }
        steps.push_back(row);
    };

    ev.initialize(s.times[0], amp(s.times[0]));
    res.trace.rows.push_back(ev.initial_record());
    verify(res.trace.rows.back(), 0, nullptr);
    for (size_t k = 1; k < s.times.size(); ++k) {
        const Field P_prev = ev.P();
        res.trace.rows.push_back(ev.step(s.times[k], amp(s.times[k])));
        verify(res.trace.rows.back(), static_cast<int>(k), &P_prev);
    }
    res.converged = res.trace.all_converged();

    double max_stab = 0, max_eq = 0, max_adm = 0, min_slack = 0, max_hill = 0;
    bool slack_ok = true;
    for (const auto& r : res.trace.rows) {
        max_stab = std::max(max_stab, r.stability);
        max_eq = std::max(max_eq, r.equilibrium);
    }
    for (const auto& row : steps) {
        max_adm = std::max(max_adm, row["admissibility"]["max"].get<double>());
        if (row.contains("hill_gap")) max_hill = std::max(max_hill, row["hill_gap"].get<double>());
        if (row.contains("slack")) {
            min_slack = std::min(min_slack, row["slack"]["min_over_scale"].get<double>());
            slack_ok = slack_ok && row["slack"]["ok"].get<bool>();
        }
    }
    res.report = {{"scenario", s.name},
                  {"model", model_name(s.model)},
                  {"free_dofs", disc.free_dofs()},
                  {"points", disc.point_count()},
                  {"first_yield_amplitude", ay},
                  {"linear_solver", SpdSolver::backend_name(s.solver.linear)},
                  {"steps", steps},
                  {"summary",
                   {{"all_converged", res.converged},
                    {"relative_balance", res.trace.relative_balance()},
                    {"max_stability", max_stab},
                    {"max_equilibrium", max_eq},
                    {"max_admissibility", max_adm},
                    {"max_hill_gap", max_hill},
                    {"stress_residuals", summary_stress.residuals},
                    {"min_slack_over_scale", min_slack},
                    {"slack_ok", slack_ok}}}};
    if (s.model == ModelKind::Plate3D) {
        res.report["h"] = s.plate3d.h;
        res.report["eps"] = eps;
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const fs::path dir(out_dir);
        std::ofstream(dir / "trace.csv") << [&] {
            std::ostringstream os;
            write_trace_csv(os, res.trace);
            return os.str();
        }();
        std::ofstream(dir / "report.json") << res.report.dump(2) << '\n';
        std::ofstream(dir / "state.json") << state_json(s, ev, s.times.back(), ay).dump() << '\n';
        {
            std::vector<std::string> names;
            for (const char* f : {"E", "P", "S"})
                for (int c = 0; c < D; ++c) names.push_back(f + std::to_string(c));
            std::ofstream os(dir / "fields.csv");
            write_point_csv(os, ad.points(), names, stack_fields<D>({ev.elastic_strain(), ev.P(), ev.stress()}));
        }
        if (s.vtk) {
            std::ofstream os(dir / "displacement.vtk");
            write_vtk(os, ad.lattice(ev.u(), ev.amplitude()), s.name + " displacement");
        }
    }
    return res;
}

template <int D, int N>
json verify_with(const Scenario& s, Adapter<D, N> ad, const json& state) {
    using Field = typename Discretization<D, N>::Field;
    const auto& disc = *ad.disc;
    if (state.at("model").get<std::string>() != model_name(s.model))
        throw SchemaError("state was produced by a different model");
    const auto uv = state.at("u").get<std::vector<double>>();
    if (static_cast<int>(uv.size()) != disc.free_dofs()) throw SchemaError("state does not match the scenario's grid");
    const VecX u = Eigen::Map<const VecX>(uv.data(), uv.size());
    const auto& Pj = state.at("P");
    if (static_cast<int>(Pj.size()) != disc.point_count()) throw SchemaError("state does not match the scenario's grid");
    Field P(disc.point_count());
    for (int p = 0; p < disc.point_count(); ++p) {
        const auto v = Pj[p].get<std::vector<double>>();
        if (v.size() != static_cast<size_t>(D)) throw SchemaError("plastic strain has the wrong dimension");
        P[p] = Eigen::Map<const Eigen::Matrix<double, D, 1>>(v.data());
    }
    const double amp = state.at("amplitude").get<double>();
    Field T;
    disc.strain(u, amp, T);
    Field E(T.size());
    for (size_t p = 0; p < T.size(); ++p) E[p] = T[p] - P[p];
    const Field S = stress_field(disc, E);
    auto chk = ad.checker();
    double q = 0;
    for (int p = 0; p < disc.point_count(); ++p) q += disc.point_weight(p) * disc.point_law(p).energy(E[p]);
    const double H = dissipation_of(disc, P);
    std::mt19937_64 rng(s.seed);
    json out;
    out["model"] = model_name(s.model);
    out["amplitude"] = amp;
    out["energy"] = q;
    out["dissipation_of_P"] = H;
    out["admissibility"] = ad.admissible(u, amp, P).to_json();
    StressReport sr = ad.stress(chk, S);
    out["slack"] = slack_samples(chk, S, u, amp, P, s.stress_samples, rng, std::max(q + H, 1e-300), &sr.slack);
    out["stress"] = sr.to_json();
    return out;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const std::string& out_dir) {
    const Models m = build(s);
    if (m.m0) return run_with(s, adapter(*m.m0), out_dir, 0);
    if (m.mi) return run_with(s, adapter(*m.mi), out_dir, 0);
    return run_with(s, adapter(*m.m3), out_dir, m.eps);
}

json verify_state(const Scenario& s, const json& state) {
    const Models m = build(s);
    try {
        if (m.m0) return verify_with(s, adapter(*m.m0), state);
        if (m.mi) return verify_with(s, adapter(*m.mi), state);
        return verify_with(s, adapter(*m.m3), state);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("state file: ") + e.what());
    }
}

// ---------------------------------------------------------------------------------------------
// h sweep

json SweepTable::to_json() const {
    json rows_j = json::array();
    for (const auto& r : rows)
        rows_j.push_back({{"h", r.h}, {"eps", r.eps}, {"n1", r.n1}, {"n2", r.n2}, {"error", r.error},
                          {"relative_error", r.relative_error}, {"Q_h", r.Q_h}, {"Q_hom", r.Q_hom},
                          {"energy_gap", r.energy_gap}, {"converged", r.converged}, {"status", r.status}});
    return {{"rows", rows_j},
            {"limit_norm", limit_norm},
            {"error_decreasing", error_decreasing},
            {"energy_gap_decreasing", gap_decreasing},
            {"verdict", error_decreasing ? "monotone" : "non-monotone (grids may be under-resolved)"}};
}

void SweepTable::write_csv(std::ostream& os) const {
    os << "h,eps,n1,n2,error,relative_error,Q_h,Q_hom,energy_gap,converged,status\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,", r.h, r.eps, r.n1, r.n2,
                      r.error, r.relative_error, r.Q_h, r.Q_hom, r.energy_gap, r.converged ? 1 : 0);
        os << buf << '"' << r.status << "\"\n";
    }
}

namespace {

double mandel_norm(const Mandel3& v) { return v.norm(); }

}  // namespace

SweepTable h_sweep(const Scenario& s, const std::vector<double>& hs, const std::string& out_dir) {
    if (s.model == ModelKind::Plate3D) throw SchemaError("sweep needs a limit model (gamma0 or gamma_inf) as reference");
    if (hs.empty()) throw SchemaError("sweep needs at least one h");
    const Regime regime = s.model == ModelKind::Gamma0 ? Regime::Gamma0 : Regime::GammaInf;

    // limit solution at the final time
    std::vector<Mandel3> F;
    std::vector<ProductPoint> pts;
    double q_hom = 0, unit = 1;
    auto amps = [&](double u) {
        std::vector<double> a;
        for (double t : s.times) a.push_back(u * s.load.program(t));
        return a;
    };
    if (regime == Regime::Gamma0) {
        const LimitModel0 m(s.plate, s.transverse_points, s.geometry, s.load);
        Evolution<3, 3> ev(m.discretization(), s.solver);
        if (s.amplitude_in_first_yield) unit = first_yield_amplitude(ev);
        const auto tr = run_evolution(ev, s.times, amps(unit));
        if (!tr.all_converged()) throw std::runtime_error("limit evolution did not converge");
        q_hom = tr.rows.back().Q;
        F = m.completed_strain(m.state(ev.u(), ev.amplitude(), ev.P()));
        pts = m.product_points();
    } else {
        const LimitModelInf m(s.plate, s.transverse_points, s.geometry, s.load);
        Evolution<6, 5> ev(m.discretization(), s.solver);
        if (s.amplitude_in_first_yield) unit = first_yield_amplitude(ev);
        const auto tr = run_evolution(ev, s.times, amps(unit));
        if (!tr.all_converged()) throw std::runtime_error("limit evolution did not converge");
        q_hom = tr.rows.back().Q;
        const auto st = m.state(ev.u(), ev.amplitude(), ev.P());
        F.resize(st.E.rows());
        for (Eigen::Index k = 0; k < st.E.rows(); ++k) F[k] = st.E.row(k).transpose();
        pts = m.product_points();
    }

    SweepTable table;
    double n2 = 0;
    for (size_t k = 0; k < pts.size(); ++k) n2 += pts[k].weight * F[k].squaredNorm();
    table.limit_norm = std::sqrt(n2);

    for (double h : hs) {
        SweepRow row;
        row.h = h;
        row.Q_hom = q_hom;
        try {
            const double raw = s.plate3d.eps > 0 ? s.plate3d.eps : default_eps(regime, h);
            row.eps = aligned_eps(s.plate.a, raw);
            const MacroGrid g = plane_grid_3d(s, row.eps);
            row.n1 = g.n1;
            row.n2 = g.n2;
            Model3D::Options o;
            o.assumed_shear = s.plate3d.assumed_shear;
            const Model3D m3(g, s.plate3d.layers, h, row.eps, s.geometry, s.load, o);
            Evolution<6, 5> ev(m3, s.solver);
            const auto tr = run_evolution(ev, s.times, amps(unit));
            row.converged = tr.all_converged();
            row.Q_h = tr.rows.back().Q;
            row.energy_gap = std::abs(row.Q_h - q_hom);
            const auto field = m3.sampler(ev.elastic_strain());
            row.error = two_scale_error<Mandel3>(field, row.eps, pts, F, mandel_norm);
            row.relative_error = table.limit_norm > 0 ? row.error / table.limit_norm : row.error;
            if (!row.converged) row.status = "unconverged steps";
        } catch (const std::exception& e) {
            row.converged = false;
            row.status = std::string("failed: ") + e.what();
        }
        table.rows.push_back(row);
    }
    auto strictly_decreasing = [&](auto get) {
        for (size_t k = 0; k < table.rows.size(); ++k) {
            if (table.rows[k].status != "ok") return false;
            if (k > 0 && !(get(table.rows[k]) < get(table.rows[k - 1]))) return false;
        }
        return true;
    };
    table.error_decreasing = strictly_decreasing([](const SweepRow& r) { return r.error; });
    table.gap_decreasing = strictly_decreasing([](const SweepRow& r) { return r.energy_gap; });

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream csv(fs::path(out_dir) / "sweep.csv");
        table.write_csv(csv);
        std::ofstream(fs::path(out_dir) / "sweep.json") << table.to_json().dump(2) << '\n';
    }
    return table;
}

// ---------------------------------------------------------------------------------------------

json reduce_material(const MaterialPhase& phase, int boundary_samples) {
    const ReducedLaw r(phase);
    json c = json::array();
    for (int i = 0; i < 3; ++i) c.push_back({r.stiffness()(i, 0), r.stiffness()(i, 1), r.stiffness()(i, 2)});
    json boundary = json::array();
    for (int k = 0; k < boundary_samples; ++k) {
        const double th = 2 * M_PI * k / boundary_samples;
        // directions in the (sigma11, sigma22) plane, then with shear
        for (double shear : {0.0, 0.5}) {
            const Sym2 d{std::cos(th), std::sin(th), shear};
            const double g = r.yield_gauge(d);
            const Sym2 b = (1 / g) * d;
            boundary.push_back({b.a11, b.a22, b.a12});
        }
    }
    json table = json::array();
    const std::vector<std::pair<std::string, Sym2>> rows = {{"diag(1,0)", {1, 0, 0}},
                                                           {"diag(0,1)", {0, 1, 0}},
                                                           {"I2", {1, 1, 0}},
                                                           {"diag(1,-1)", {1, -1, 0}},
                                                           {"shear e12", {0, 0, 1}},
                                                           {"diag(1,-0.5)", {1, -0.5, 0}}};
    for (const auto& [name, xi] : rows) {
        const Vec3 lam = r.lambda(xi);
        table.push_back({{"xi", name}, {"H_r", r.dissipation(xi)}, {"Q_r", r.energy(xi)},
                         {"lambda", {lam[0], lam[1], lam[2]}}});
    }
    return {{"phase", phase_to_json(phase)}, {"C_r_mandel", c}, {"K_r_boundary", boundary}, {"H_r", table}};
}

}  // namespace tsplate
