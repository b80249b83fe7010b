#include "tsplate/limit_models.hpp"

#include <map>
#include <stdexcept>

namespace tsplate {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct InPlane {
    int c11, c22, c12;
};

// symmetric gradient of a P1 vector field; ids(node, comp) gives the unknown
template <class Ids>
void add_sym_grad(Triplets& t, int row0, const InPlane& ip, const GridTriangle& tri, Ids ids, double scale) {
    for (int k = 0; k < 3; ++k) {
        const Vec2& g = tri.grad[k];
        const int n = tri.nodes[k];
        t.emplace_back(row0 + ip.c11, ids(n, 0), scale * g[0]);
        t.emplace_back(row0 + ip.c22, ids(n, 1), scale * g[1]);
        t.emplace_back(row0 + ip.c12, ids(n, 0), scale * kSqrt2 * 0.5 * g[1]);
        t.emplace_back(row0 + ip.c12, ids(n, 1), scale * kSqrt2 * 0.5 * g[0]);
    }
}

// Hessian of a scalar field from second-difference stencils
template <class Ids>
void add_hessian(Triplets& t, int row0, const InPlane& ip, const std::array<Stencil, 3>& st, Ids ids, double scale) {
    const int comps[3] = {ip.c11, ip.c22, ip.c12};
    const double f[3] = {1, 1, kSqrt2};
    for (int c = 0; c < 3; ++c)
        for (size_t k = 0; k < st[c].index.size(); ++k)
            t.emplace_back(row0 + comps[c], ids(st[c].index[k]), scale * f[c] * st[c].coeff[k]);
}

std::pair<int, int> law_key(const TorusGeometry& g, int cell) { return {g.phase_of_cell(cell), g.yield_phase(cell)}; }

}  // namespace

void MacroDofs::build(const MacroGrid& g, const BoundaryDatum& w, DofTable& dofs, std::vector<double>& datum) {
    ubar.assign(g.node_count(), {0, 0});
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            const Vec2 x = g.position(i, j);
            const double v[2] = {w.w1.value(x), w.w2.value(x)};
            for (int c = 0; c < 2; ++c) {
                const int id = g.on_boundary(i, j) ? dofs.add_fixed(v[c]) : dofs.add_free();
                ubar[g.node(i, j)][c] = id;
                datum.push_back(v[c]);
            }
        }
    u3.assign(g.ghost_node_count(), 0);
    mirror.assign(g.ghost_node_count(), 0);
    for (int j = -1; j <= g.n2; ++j)
        for (int i = -1; i <= g.n1; ++i) {
            const int n = g.ghost_node(i, j);
            const auto m = g.ghost_mirror(i, j);
            mirror[n] = g.ghost_node(m[0], m[1]);
            const double v = w.w3.value(g.position(i, j));
            if (g.is_ghost(i, j)) {
                const double offset = v - w.w3.value(g.position(m[0], m[1]));
                u3[n] = dofs.add_fixed(offset);
                datum.push_back(offset);
            } else {
                u3[n] = g.on_boundary(i, j) ? dofs.add_fixed(v) : dofs.add_free();
                datum.push_back(v);
            }
        }
}

Stencil MacroDofs::resolve(const Stencil& s) const {
    Stencil r;
    for (size_t k = 0; k < s.index.size(); ++k) {
        const int n = s.index[k];
        r.add(u3[n], s.coeff[k]);
        if (mirror[n] != n) r.add(u3[mirror[n]], s.coeff[k]);
    }
    return r;
}

LimitModel::LimitModel(const MacroGrid& macro, int transverse_points, const TorusGeometry& geometry,
                       const BoundaryDatum& w)
    : macro_(macro), geometry_(geometry), datum_(w) {
    macro_.validate();
    if (transverse_points < 2) throw std::invalid_argument("limit model needs at least two transverse points");
    rule_ = TransverseRule::gauss(transverse_points);
    micro_.n = geometry.resolution();
    const auto ordering = check_phase_ordering(geometry);
    if (!ordering.ok) throw std::invalid_argument(ordering.message());
}

void LimitModel::macro_kinds(const DofTable& dofs, std::vector<DofKind>& out) const {
    out.assign(dofs.free_count(), DofKind::MicroBar);
    for (const auto& ids : macro_dofs_.ubar)
        for (int id : ids)
            if (!dofs.fixed(id)) out[dofs.local(id)] = DofKind::Membrane;
    for (int id : macro_dofs_.u3)
        if (!dofs.fixed(id)) out[dofs.local(id)] = DofKind::Bending;
}

// ---------------------------------------------------------------------------------------------

LimitModel0::LimitModel0(const MacroGrid& macro, int transverse_points, const TorusGeometry& geometry,
                         const BoundaryDatum& w)
    : LimitModel(macro, transverse_points, geometry, w) {
    std::vector<double> datum;
    macro_dofs_.build(macro_, datum_, dofs_, datum);
    const int nt = macro_.triangle_count(), mt = micro_.triangle_count(), ny = micro_.node_count();
    mu_id_.resize(static_cast<size_t>(nt) * ny * 2);
    kappa_id_.resize(static_cast<size_t>(nt) * ny);
    for (int p = 0; p < nt; ++p)
        for (int n = 0; n < ny; ++n) {
            for (int c = 0; c < 2; ++c) {
                mu_id_[(p * ny + n) * 2 + c] = n == 0 ? dofs_.add_fixed(0) : dofs_.add_free();
                datum.push_back(0);
            }
            kappa_id_[p * ny + n] = n == 0 ? dofs_.add_fixed(0) : dofs_.add_free();
            datum.push_back(0);
        }

    std::map<std::pair<int, int>, int> law_index;
    std::vector<Law2> laws;
    std::vector<int> cell_law(geometry_.cell_count());
    for (int c = 0; c < geometry_.cell_count(); ++c) {
        auto key = law_key(geometry_, c);
        auto it = law_index.find(key);
        if (it == law_index.end()) {
            reduced_.emplace_back(geometry_.phase(key.first), geometry_.phase(key.second).yield);
            const auto& r = reduced_.back();
            laws.emplace_back(r.stiffness(), Eigen::Matrix3d::Identity(), r.yield_form());
            it = law_index.emplace(key, static_cast<int>(laws.size()) - 1).first;
        }
        cell_law[c] = it->second;
    }

    const InPlane ip{0, 1, 2};
    Triplets b0, b1;
    std::vector<double> colw;
    std::vector<int> law_ids;
    const int L = rule_.size();
    for (int p = 0; p < nt; ++p) {
        const GridTriangle tp = macro_.triangle(p);
        auto hp = macro_hessian_stencil(macro_, tp);
        for (auto& st : hp) st = macro_dofs_.resolve(st);
        for (int m = 0; m < mt; ++m) {
            const GridTriangle tm = micro_.triangle(m);
            const int row = (p * mt + m) * 3;
            add_sym_grad(b0, row, ip, tp, [&](int n, int c) { return macro_dofs_.ubar[n][c]; }, 1.0);
            add_sym_grad(b0, row, ip, tm, [&](int n, int c) { return mu_id_[(p * ny + n) * 2 + c]; }, 1.0);
            add_hessian(b1, row, ip, hp, [](int id) { return id; }, -1.0);
            const auto hm = micro_hessian_stencil(micro_, tm.corner_i, tm.corner_j);
            add_hessian(b1, row, ip, hm, [&](int n) { return kappa_id_[p * ny + n]; }, -1.0);
            colw.push_back(tp.area * tm.area);
            const int cell = geometry_.cell(tm.cell_i, tm.cell_j);
            law_ids.push_back(cell_law[cell]);
            for (int q = 0; q < L; ++q) {
                points_.push_back({tp.centroid, rule_.z[q], tm.centroid, tp.area * tm.area * rule_.w[q]});
                point_cell_.push_back(cell);
            }
        }
    }
    disc_.assemble(dofs_, b0, b1, nt * mt, rule_.z, rule_.w, std::move(colw), std::move(law_ids), std::move(laws),
                   Eigen::Map<const VecX>(datum.data(), datum.size()));
}

const ReducedLaw& LimitModel0::point_reduced_law(int point) const {
    return reduced_[disc_.law_id(point / rule_.size())];
}

TwoScaleState LimitModel0::state(const VecX& u, double amplitude, const std::vector<Mandel2>& P) const {
    TwoScaleState s;
    s.regime = Regime::Gamma0;
    VecX ufix = amplitude * disc_.fixed_unit_values();
    auto val = [&](int id) { return dofs_.fixed(id) ? ufix[dofs_.local(id)] : u[dofs_.local(id)]; };
    s.u = KLState::zero(macro_);
    for (int n = 0; n < macro_.node_count(); ++n)
        s.u.ubar[n] = Vec2(val(macro_dofs_.ubar[n][0]), val(macro_dofs_.ubar[n][1]));
    s.u.u3 = macro_dofs_.u3_values(val);
    const int nt = macro_.triangle_count(), ny = micro_.node_count();
    s.mu.resize(static_cast<size_t>(nt) * ny);
    s.kappa.resize(static_cast<size_t>(nt) * ny);
    for (int p = 0; p < nt; ++p) {
        Vec2 mmu = Vec2::Zero();
        double mk = 0;
        for (int n = 0; n < ny; ++n) {
            s.mu[p * ny + n] = Vec2(val(mu_id_[(p * ny + n) * 2]), val(mu_id_[(p * ny + n) * 2 + 1]));
            s.kappa[p * ny + n] = val(kappa_id_[p * ny + n]);
            mmu += s.mu[p * ny + n];
            mk += s.kappa[p * ny + n];
        }
        mmu /= ny;
        mk /= ny;
        for (int n = 0; n < ny; ++n) {
            s.mu[p * ny + n] -= mmu;
            s.kappa[p * ny + n] -= mk;
        }
    }
    std::vector<Mandel2> T;
    disc_.strain(u, amplitude, T);
    s.E.resize(T.size(), 3);
    s.P.resize(T.size(), 3);
    for (size_t k = 0; k < T.size(); ++k) {
        s.P.row(k) = P[k].transpose();
        s.E.row(k) = (T[k] - P[k]).transpose();
    }
    return s;
}

void LimitModel0::pack(const TwoScaleState& s, VecX& u, VecX& ufixed) const {
    u.setZero(dofs_.free_count());
    ufixed.setZero(dofs_.fixed_count());
    auto put = [&](int id, double v) { (dofs_.fixed(id) ? ufixed : u)[dofs_.local(id)] = v; };
    for (int n = 0; n < macro_.node_count(); ++n)
        for (int c = 0; c < 2; ++c) put(macro_dofs_.ubar[n][c], s.u.ubar.at(n)[c]);
    if (static_cast<int>(s.u.u3.size()) != macro_.ghost_node_count()) throw std::invalid_argument("u3 has the wrong size");
    for (int n = 0; n < macro_.ghost_node_count(); ++n) {
        const int m = macro_dofs_.mirror[n];
        put(macro_dofs_.u3[n], m == n ? s.u.u3[n] : s.u.u3[n] - s.u.u3[m]);
    }
    const size_t total = static_cast<size_t>(macro_.triangle_count()) * micro_.node_count();
    if (s.mu.size() != total || s.kappa.size() != total) throw std::invalid_argument("corrector fields have the wrong size");
    for (size_t k = 0; k < total; ++k) {
        put(mu_id_[2 * k], s.mu[k][0]);
        put(mu_id_[2 * k + 1], s.mu[k][1]);
        put(kappa_id_[k], s.kappa[k]);
    }
}

std::vector<Mandel3> LimitModel0::completed_strain(const TwoScaleState& s) const {
    std::vector<Mandel3> out(s.E.rows());
    for (Eigen::Index k = 0; k < s.E.rows(); ++k) {
        const Mandel2 e = s.E.row(k).transpose();
        out[k] = point_reduced_law(static_cast<int>(k)).reduction_operator(Sym2::from_mandel(e)).mandel();
    }
    return out;
}

std::vector<DofKind> LimitModel0::free_dof_kinds() const {
    std::vector<DofKind> out;
    macro_kinds(dofs_, out);
    for (int id : kappa_id_)
        if (!dofs_.fixed(id)) out[dofs_.local(id)] = DofKind::MicroHat;
    return out;
}

// ---------------------------------------------------------------------------------------------

LimitModelInf::LimitModelInf(const MacroGrid& macro, int transverse_points, const TorusGeometry& geometry,
                             const BoundaryDatum& w)
    : LimitModel(macro, transverse_points, geometry, w) {
    std::vector<double> datum;
    macro_dofs_.build(macro_, datum_, dofs_, datum);
    const int nt = macro_.triangle_count(), mt = micro_.triangle_count(), ny = micro_.node_count();
    const int L = rule_.size(), groups = nt * L;
    mu_id_.resize(static_cast<size_t>(groups) * ny * 2);
    kappa_id_.resize(static_cast<size_t>(groups) * ny);
    zeta_id_.resize(static_cast<size_t>(groups) * 3);
    for (int g = 0; g < groups; ++g) {
        for (int n = 0; n < ny; ++n) {
            for (int c = 0; c < 2; ++c) {
                mu_id_[(g * ny + n) * 2 + c] = n == 0 ? dofs_.add_fixed(0) : dofs_.add_free();
                datum.push_back(0);
            }
            kappa_id_[g * ny + n] = n == 0 ? dofs_.add_fixed(0) : dofs_.add_free();
            datum.push_back(0);
        }
        for (int c = 0; c < 3; ++c) {
            zeta_id_[g * 3 + c] = dofs_.add_free();
            datum.push_back(0);
        }
    }

    std::map<std::pair<int, int>, int> law_index;
    std::vector<Law3> laws;
    std::vector<int> cell_law(geometry_.cell_count());
    for (int c = 0; c < geometry_.cell_count(); ++c) {
        auto key = law_key(geometry_, c);
        auto it = law_index.find(key);
        if (it == law_index.end()) {
            laws.emplace_back(geometry_.phase(key.first).stiffness(), deviatoric_basis(),
                              geometry_.phase(key.second).yield.form());
            it = law_index.emplace(key, static_cast<int>(laws.size()) - 1).first;
        }
        cell_law[c] = it->second;
    }

    const InPlane ip{0, 1, 3};
    Triplets b0;
    std::vector<double> colw;
    std::vector<int> law_ids;
    for (int p = 0; p < nt; ++p) {
        const GridTriangle tp = macro_.triangle(p);
        auto hp = macro_hessian_stencil(macro_, tp);
        for (auto& st : hp) st = macro_dofs_.resolve(st);
        for (int q = 0; q < L; ++q) {
            const int g = p * L + q;
            for (int m = 0; m < mt; ++m) {
                const GridTriangle tm = micro_.triangle(m);
                const int row = (g * mt + m) * 6;
                add_sym_grad(b0, row, ip, tp, [&](int n, int c) { return macro_dofs_.ubar[n][c]; }, 1.0);
                add_hessian(b0, row, ip, hp, [](int id) { return id; }, -rule_.z[q]);
                add_sym_grad(b0, row, ip, tm, [&](int n, int c) { return mu_id_[(g * ny + n) * 2 + c]; }, 1.0);
                // transverse column: (13), (23) = zeta_a + d_a kappa, (33) = zeta_3
                b0.emplace_back(row + 2, zeta_id_[g * 3 + 2], 1.0);
                b0.emplace_back(row + 4, zeta_id_[g * 3 + 0], kSqrt2);
                b0.emplace_back(row + 5, zeta_id_[g * 3 + 1], kSqrt2);
                for (int k = 0; k < 3; ++k) {
                    const int id = kappa_id_[g * ny + tm.nodes[k]];
                    b0.emplace_back(row + 4, id, kSqrt2 * tm.grad[k][0]);
                    b0.emplace_back(row + 5, id, kSqrt2 * tm.grad[k][1]);
                }
                const double wgt = tp.area * rule_.w[q] * tm.area;
                colw.push_back(wgt);
                const int cell = geometry_.cell(tm.cell_i, tm.cell_j);
                law_ids.push_back(cell_law[cell]);
                points_.push_back({tp.centroid, rule_.z[q], tm.centroid, wgt});
                point_cell_.push_back(cell);
            }
        }
    }
    disc_.assemble(dofs_, b0, {}, groups * mt, {0.0}, {1.0}, std::move(colw), std::move(law_ids), std::move(laws),
                   Eigen::Map<const VecX>(datum.data(), datum.size()));
}

TwoScaleState LimitModelInf::state(const VecX& u, double amplitude, const std::vector<Mandel3>& P) const {
    TwoScaleState s;
    s.regime = Regime::GammaInf;
    VecX ufix = amplitude * disc_.fixed_unit_values();
    auto val = [&](int id) { return dofs_.fixed(id) ? ufix[dofs_.local(id)] : u[dofs_.local(id)]; };
    s.u = KLState::zero(macro_);
    for (int n = 0; n < macro_.node_count(); ++n)
        s.u.ubar[n] = Vec2(val(macro_dofs_.ubar[n][0]), val(macro_dofs_.ubar[n][1]));
    s.u.u3 = macro_dofs_.u3_values(val);
    const int groups = macro_.triangle_count() * rule_.size(), ny = micro_.node_count();
    s.mu.resize(static_cast<size_t>(groups) * ny);
    s.kappa.resize(static_cast<size_t>(groups) * ny);
    s.zeta.resize(groups);
    for (int g = 0; g < groups; ++g) {
        Vec2 mmu = Vec2::Zero();
        double mk = 0;
        for (int n = 0; n < ny; ++n) {
            s.mu[g * ny + n] = Vec2(val(mu_id_[(g * ny + n) * 2]), val(mu_id_[(g * ny + n) * 2 + 1]));
            s.kappa[g * ny + n] = val(kappa_id_[g * ny + n]);
            mmu += s.mu[g * ny + n];
            mk += s.kappa[g * ny + n];
        }
        mmu /= ny;
        mk /= ny;
        for (int n = 0; n < ny; ++n) {
            s.mu[g * ny + n] -= mmu;
            s.kappa[g * ny + n] -= mk;
        }
        s.zeta[g] = Vec3(val(zeta_id_[g * 3]), val(zeta_id_[g * 3 + 1]), val(zeta_id_[g * 3 + 2]));
    }
    std::vector<Mandel3> T;
    disc_.strain(u, amplitude, T);
    s.E.resize(T.size(), 6);
    s.P.resize(T.size(), 6);
    for (size_t k = 0; k < T.size(); ++k) {
        s.P.row(k) = P[k].transpose();
        s.E.row(k) = (T[k] - P[k]).transpose();
    }
    return s;
}

void LimitModelInf::pack(const TwoScaleState& s, VecX& u, VecX& ufixed) const {
    u.setZero(dofs_.free_count());
    ufixed.setZero(dofs_.fixed_count());
    auto put = [&](int id, double v) { (dofs_.fixed(id) ? ufixed : u)[dofs_.local(id)] = v; };
    for (int n = 0; n < macro_.node_count(); ++n)
        for (int c = 0; c < 2; ++c) put(macro_dofs_.ubar[n][c], s.u.ubar.at(n)[c]);
    if (static_cast<int>(s.u.u3.size()) != macro_.ghost_node_count()) throw std::invalid_argument("u3 has the wrong size");
    for (int n = 0; n < macro_.ghost_node_count(); ++n) {
        const int m = macro_dofs_.mirror[n];
        put(macro_dofs_.u3[n], m == n ? s.u.u3[n] : s.u.u3[n] - s.u.u3[m]);
    }
    const size_t groups = static_cast<size_t>(macro_.triangle_count()) * rule_.size();
    const size_t total = groups * micro_.node_count();
    if (s.mu.size() != total || s.kappa.size() != total || s.zeta.size() != groups)
        throw std::invalid_argument("corrector fields have the wrong size");
    for (size_t k = 0; k < total; ++k) {
        put(mu_id_[2 * k], s.mu[k][0]);
        put(mu_id_[2 * k + 1], s.mu[k][1]);
        put(kappa_id_[k], s.kappa[k]);
    }
    for (size_t g = 0; g < groups; ++g)
        for (int c = 0; c < 3; ++c) put(zeta_id_[g * 3 + c], s.zeta[g][c]);
}

std::vector<DofKind> LimitModelInf::free_dof_kinds() const {
    std::vector<DofKind> out;
    macro_kinds(dofs_, out);
    for (int id : zeta_id_) out[dofs_.local(id)] = DofKind::Transverse;
    return out;
}

}  // namespace tsplate
