#include "tsplate/kl_state.hpp"

#include <json.hpp>
#include <stdexcept>

namespace tsplate {

double LoadProgram::operator()(double t) const {
    if (t <= times.front()) return amplitudes.front();
    if (t >= times.back()) return amplitudes.back();
    for (size_t k = 1; k < times.size(); ++k)
        if (t <= times[k]) {
            const double s = (t - times[k - 1]) / (times[k] - times[k - 1]);
            return (1 - s) * amplitudes[k - 1] + s * amplitudes[k];
        }
    return amplitudes.back();
}

void LoadProgram::validate() const {
    if (times.size() < 2 || times.size() != amplitudes.size())
        throw std::invalid_argument("load program needs matching times/amplitudes with at least two entries");
    for (size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw std::invalid_argument("load program times must increase");
}

Vec3 BoundaryDatum::displacement(const Vec2& x, double x3) const {
    const Vec2 g = w3.gradient(x);
    return {w1.value(x) - x3 * g[0], w2.value(x) - x3 * g[1], w3.value(x)};
}

Sym2 BoundaryDatum::membrane_strain(const Vec2& x) const {
    const Vec2 g1 = w1.gradient(x), g2 = w2.gradient(x);
    return {g1[0], g2[1], 0.5 * (g1[1] + g2[0])};
}

Sym2 BoundaryDatum::curvature_strain() const { return -1.0 * w3.hessian(); }

namespace {

Quadratic2 quad_from_json(const nlohmann::json& j) {
    Quadratic2 q;
    if (j.is_null()) return q;
    if (!j.is_object()) throw std::invalid_argument("displacement shape must be an object of coefficients");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const double v = it.value().get<double>();
        const std::string& k = it.key();
        if (k == "c") q.c = v;
        else if (k == "x") q.x = v;
        else if (k == "y") q.y = v;
        else if (k == "xx") q.xx = v;
        else if (k == "xy") q.xy = v;
        else if (k == "yy") q.yy = v;
        else throw std::invalid_argument("unknown shape coefficient \"" + k + "\"");
    }
    return q;
}

nlohmann::json quad_to_json(const Quadratic2& q) {
    return {{"c", q.c}, {"x", q.x}, {"y", q.y}, {"xx", q.xx}, {"xy", q.xy}, {"yy", q.yy}};
}

}  // namespace

BoundaryDatum datum_from_json(const nlohmann::json& j) {
    BoundaryDatum d;
    if (!j.is_object()) throw std::invalid_argument("load must be an object");
    if (j.contains("w1")) d.w1 = quad_from_json(j.at("w1"));
    if (j.contains("w2")) d.w2 = quad_from_json(j.at("w2"));
    if (j.contains("w3")) d.w3 = quad_from_json(j.at("w3"));
    if (j.contains("program")) {
        d.program.times = j.at("program").at("times").get<std::vector<double>>();
        d.program.amplitudes = j.at("program").at("amplitudes").get<std::vector<double>>();
    }
    d.program.validate();
    return d;
}

nlohmann::json datum_to_json(const BoundaryDatum& d) {
    return {{"w1", quad_to_json(d.w1)},
            {"w2", quad_to_json(d.w2)},
            {"w3", quad_to_json(d.w3)},
            {"program", {{"times", d.program.times}, {"amplitudes", d.program.amplitudes}}}};
}

KLState KLState::zero(const MacroGrid& g) {
    KLState s;
    s.ubar.assign(g.node_count(), Vec2::Zero());
    s.u3.assign(g.ghost_node_count(), 0.0);
    return s;
}

KLState KLState::from_datum(const MacroGrid& g, const BoundaryDatum& w, double amplitude) {
    KLState s = zero(g);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            const Vec2 x = g.position(i, j);
            s.ubar[g.node(i, j)] = amplitude * Vec2(w.w1.value(x), w.w2.value(x));
        }
    for (int j = -1; j <= g.n2; ++j)
        for (int i = -1; i <= g.n1; ++i) s.u3[g.ghost_node(i, j)] = amplitude * w.w3.value(g.position(i, j));
    return s;
}

KLStrain kl_strain(const MacroGrid& g, const KLState& u) {
    if (static_cast<int>(u.ubar.size()) != g.node_count() || static_cast<int>(u.u3.size()) != g.ghost_node_count())
        throw std::invalid_argument("kl_strain: state does not match grid");
    KLStrain s;
    const int nt = g.triangle_count();
    s.bar.resize(nt);
    s.hat.resize(nt);
    for (int t = 0; t < nt; ++t) {
        const GridTriangle tri = g.triangle(t);
        Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();  // grad(c, a) = d_a u_c
        for (int k = 0; k < 3; ++k) grad += u.ubar[tri.nodes[k]] * tri.grad[k].transpose();
        s.bar[t] = Sym2::from_matrix(grad);
        const auto st = macro_hessian_stencil(g, tri);
        double h[3] = {0, 0, 0};
        for (int c = 0; c < 3; ++c)
            for (size_t k = 0; k < st[c].index.size(); ++k) h[c] += st[c].coeff[k] * u.u3[st[c].index[k]];
        s.hat[t] = {-h[0], -h[1], -h[2]};
    }
    return s;
}

}  // namespace tsplate
