#include "tsplate/model_3d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tsplate {

namespace {

const double kG = 1 / std::sqrt(3.0);

int sgn(int bit) { return 2 * bit - 1; }

// derivatives of the 8 trilinear shape functions at reference point (r, s, t), physical scaling applied
Eigen::Matrix<double, 3, 8> shape_gradients(double r, double s, double t, double d1, double d2, double d3) {
    Eigen::Matrix<double, 3, 8> g;
    for (int a = 0; a < 8; ++a) {
        const int s1 = sgn(a & 1), s2 = sgn((a >> 1) & 1), s3 = sgn((a >> 2) & 1);
        g(0, a) = 0.125 * s1 * (1 + s2 * s) * (1 + s3 * t) * 2 / d1;
        g(1, a) = 0.125 * s2 * (1 + s1 * r) * (1 + s3 * t) * 2 / d2;
        g(2, a) = 0.125 * s3 * (1 + s1 * r) * (1 + s2 * s) * 2 / d3;
    }
    return g;
}

// unscaled Mandel strain rows at a reference point
Eigen::Matrix<double, 6, 24> strain_rows(double r, double s, double t, double d1, double d2, double d3) {
    const auto g = shape_gradients(r, s, t, d1, d2, d3);
    Eigen::Matrix<double, 6, 24> b = Eigen::Matrix<double, 6, 24>::Zero();
    const double h = 0.5 * kSqrt2;
    for (int a = 0; a < 8; ++a) {
        const int c = 3 * a;
        b(0, c + 0) = g(0, a);
        b(1, c + 1) = g(1, a);
        b(2, c + 2) = g(2, a);
        b(3, c + 0) = h * g(1, a);
        b(3, c + 1) = h * g(0, a);
        b(4, c + 0) = h * g(2, a);
        b(4, c + 2) = h * g(0, a);
        b(5, c + 1) = h * g(2, a);
        b(5, c + 2) = h * g(1, a);
    }
    return b;
}

}  // namespace

Model3D::Model3D(const MacroGrid& plane, int layers, double h, double eps, const TorusGeometry& geometry,
                 const BoundaryDatum& w, Options options)
    : plane_(plane), nz_(layers), h_(h), eps_(eps), options_(options) {
    plane_.validate();
    if (nz_ < 1) throw std::invalid_argument("3D model needs at least one layer");
    if (!(h_ > 0)) throw std::invalid_argument("thickness h must be positive");
    if (!(eps_ > 0)) throw std::invalid_argument("period eps must be positive");
    const auto ordering = check_phase_ordering(geometry);
    if (!ordering.ok) throw std::invalid_argument(ordering.message());

    const double d1 = plane_.d1(), d2 = plane_.d2(), d3 = 1.0 / nz_;
    n_elements_ = (plane_.n1 - 1) * (plane_.n2 - 1) * nz_;
    point_weight_ = d1 * d2 * d3 / 8;

    const Mandel3 lam = lambda_h_factors(h_);
    for (int gp = 0; gp < 8; ++gp) {
        const double r = sgn(gp & 1) * kG, s = sgn((gp >> 1) & 1) * kG, t = sgn((gp >> 2) & 1) * kG;
        Eigen::Matrix<double, 6, 24> b = strain_rows(r, s, t, d1, d2, d3);
        if (options_.assumed_shear) {
            // (13) tied at the edge midpoints r = 0, s = -1/+1; (23) at r = -1/+1, s = 0
            const auto bs_m = strain_rows(0, -1, t, d1, d2, d3), bs_p = strain_rows(0, 1, t, d1, d2, d3);
            const auto br_m = strain_rows(-1, 0, t, d1, d2, d3), br_p = strain_rows(1, 0, t, d1, d2, d3);
            b.row(4) = 0.5 * (1 - s) * bs_m.row(4) + 0.5 * (1 + s) * bs_p.row(4);
            b.row(5) = 0.5 * (1 - r) * br_m.row(5) + 0.5 * (1 + r) * br_p.row(5);
        }
        b_plain_[gp] = b;
        b_scaled_[gp] = lam.asDiagonal() * b;
    }

    // unknowns
    dof_.assign(static_cast<size_t>(node_count()) * 3, 0);
    datum_nodal_.resize(node_count());
    std::vector<double> fixed;
    for (int k = 0; k <= nz_; ++k)
        for (int j = 0; j < plane_.n2; ++j)
            for (int i = 0; i < plane_.n1; ++i) {
                const int n = node(i, j, k);
                const Vec3 x = node_position(n);
                datum_nodal_[n] = w.displacement(x.head<2>(), x[2]);
                for (int c = 0; c < 3; ++c) {
                    if (lateral(i, j)) {
                        dof_[3 * n + c] = -1 - static_cast<int>(fixed.size());
                        fixed.push_back(datum_nodal_[n][c]);
                    } else {
                        dof_[3 * n + c] = n_free_++;
                    }
                }
            }
    fixed_unit_ = Eigen::Map<VecX>(fixed.data(), fixed.size());

    // laws at the Gauss points
    std::map<std::pair<int, int>, int> law_index;
    law_id_.resize(static_cast<size_t>(n_elements_) * 8);
    point_cell_.resize(law_id_.size());
    for (int p = 0; p < columns(); ++p) {
        const Vec3 x = point_position(p);
        const int cell = geometry.cell_at(x.head<2>() / eps_);
        const std::pair<int, int> key{geometry.phase_of_cell(cell), geometry.yield_phase(cell)};
        auto it = law_index.find(key);
        if (it == law_index.end()) {
            laws_.emplace_back(geometry.phase(key.first).stiffness(), deviatoric_basis(),
                               geometry.phase(key.second).yield.form());
            it = law_index.emplace(key, static_cast<int>(laws_.size()) - 1).first;
        }
        law_id_[p] = it->second;
        point_cell_[p] = cell;
    }
}

Vec3 Model3D::node_position(int n) const {
    const int i = n % plane_.n1, j = (n / plane_.n1) % plane_.n2, k = n / (plane_.n1 * plane_.n2);
    return {i * plane_.d1(), j * plane_.d2(), -0.5 + static_cast<double>(k) / nz_};
}

std::array<int, 8> Model3D::element_nodes(int e) const {
    const int c1 = plane_.n1 - 1, c2 = plane_.n2 - 1;
    const int i = e % c1, j = (e / c1) % c2, k = e / (c1 * c2);
    std::array<int, 8> nodes;
    for (int a = 0; a < 8; ++a) nodes[a] = node(i + (a & 1), j + ((a >> 1) & 1), k + ((a >> 2) & 1));
    return nodes;
}

Vec3 Model3D::point_position(int p) const {
    const int e = p / 8, gp = p % 8;
    const auto nodes = element_nodes(e);
    const Vec3 x0 = node_position(nodes[0]);
    const Vec3 d(plane_.d1(), plane_.d2(), 1.0 / nz_);
    Vec3 x;
    for (int a = 0; a < 3; ++a) x[a] = x0[a] + 0.5 * d[a] * (1 + sgn((gp >> a) & 1) * kG);
    return x;
}

void Model3D::gather(int e, const VecX& u, const VecX& ufixed, Eigen::Matrix<double, 24, 1>& ue) const {
    const auto nodes = element_nodes(e);
    for (int a = 0; a < 8; ++a)
        for (int c = 0; c < 3; ++c) {
            const int d = dof_[3 * nodes[a] + c];
            ue[3 * a + c] = d >= 0 ? u[d] : ufixed[-1 - d];
        }
}

SpMat Model3D::stiffness() const {
    // lower-triangular pattern from the 27-node neighbourhood
    const int n1 = plane_.n1, n2 = plane_.n2, n3 = nz_ + 1;
    std::vector<std::vector<int>> rows(n_free_);
    for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i) {
                const int n = node(i, j, k);
                for (int c = 0; c < 3; ++c) {
                    const int col = dof_[3 * n + c];
                    if (col < 0) continue;
                    auto& r = rows[col];
                    for (int dk = -1; dk <= 1; ++dk)
                        for (int dj = -1; dj <= 1; ++dj)
                            for (int di = -1; di <= 1; ++di) {
                                const int ii = i + di, jj = j + dj, kk = k + dk;
                                if (ii < 0 || jj < 0 || kk < 0 || ii >= n1 || jj >= n2 || kk >= n3) continue;
                                for (int cc = 0; cc < 3; ++cc) {
                                    const int row = dof_[3 * node(ii, jj, kk) + cc];
                                    if (row >= col) r.push_back(row);
                                }
                            }
                    std::sort(r.begin(), r.end());
                }
            }
    SpMat k(n_free_, n_free_);
    Eigen::VectorXi sizes(n_free_);
    for (int c = 0; c < n_free_; ++c) sizes[c] = static_cast<int>(rows[c].size());
    k.reserve(sizes);
    for (int c = 0; c < n_free_; ++c)
        for (int r : rows[c]) k.insert(r, c) = 0.0;
    rows.clear();
    rows.shrink_to_fit();
    k.makeCompressed();

    std::map<std::array<int, 8>, Eigen::Matrix<double, 24, 24>> cache;
    for (int e = 0; e < n_elements_; ++e) {
        std::array<int, 8> key;
        for (int gp = 0; gp < 8; ++gp) key[gp] = law_id_[e * 8 + gp];
        auto it = cache.find(key);
        if (it == cache.end()) {
            Eigen::Matrix<double, 24, 24> ke = Eigen::Matrix<double, 24, 24>::Zero();
            for (int gp = 0; gp < 8; ++gp)
                ke += point_weight_ * b_scaled_[gp].transpose() * laws_[key[gp]].C * b_scaled_[gp];
            it = cache.emplace(key, 0.5 * (ke + ke.transpose())).first;
        }
        const auto& ke = it->second;
        const auto nodes = element_nodes(e);
        int ids[24];
        for (int a = 0; a < 8; ++a)
            for (int c = 0; c < 3; ++c) ids[3 * a + c] = dof_[3 * nodes[a] + c];
        for (int b = 0; b < 24; ++b) {
            if (ids[b] < 0) continue;
            for (int a = 0; a < 24; ++a)
                if (ids[a] >= ids[b]) k.coeffRef(ids[a], ids[b]) += ke(a, b);
        }
    }
    return k;
}

void Model3D::strain(const VecX& u, double amplitude, Field& out) const {
    const VecX uf = amplitude * fixed_unit_;
    out.resize(static_cast<size_t>(n_elements_) * 8);
    Eigen::Matrix<double, 24, 1> ue;
    for (int e = 0; e < n_elements_; ++e) {
        gather(e, u, uf, ue);
        for (int gp = 0; gp < 8; ++gp) out[e * 8 + gp].noalias() = b_scaled_[gp] * ue;
    }
}

void Model3D::divergence(const Field& s, VecX& r_free, VecX* r_fixed) const {
    r_free.setZero(n_free_);
    if (r_fixed) r_fixed->setZero(fixed_unit_.size());
    Eigen::Matrix<double, 24, 1> re;
    for (int e = 0; e < n_elements_; ++e) {
        re.setZero();
        for (int gp = 0; gp < 8; ++gp) re.noalias() += b_scaled_[gp].transpose() * (point_weight_ * s[e * 8 + gp]);
        const auto nodes = element_nodes(e);
        for (int a = 0; a < 8; ++a)
            for (int c = 0; c < 3; ++c) {
                const int d = dof_[3 * nodes[a] + c];
                if (d >= 0)
                    r_free[d] += re[3 * a + c];
                else if (r_fixed)
                    (*r_fixed)[-1 - d] += re[3 * a + c];
            }
    }
}

void Model3D::datum_strain(Field& out) const {
    out.resize(static_cast<size_t>(n_elements_) * 8);
    Eigen::Matrix<double, 24, 1> ue;
    for (int e = 0; e < n_elements_; ++e) {
        const auto nodes = element_nodes(e);
        for (int a = 0; a < 8; ++a) ue.segment<3>(3 * a) = datum_nodal_[nodes[a]];
        for (int gp = 0; gp < 8; ++gp) out[e * 8 + gp].noalias() = b_scaled_[gp] * ue;
    }
}

std::vector<Vec3> Model3D::displacement(const VecX& u, double amplitude) const {
    std::vector<Vec3> out(node_count());
    for (int n = 0; n < node_count(); ++n)
        for (int c = 0; c < 3; ++c) {
            const int d = dof_[3 * n + c];
            out[n][c] = d >= 0 ? u[d] : amplitude * fixed_unit_[-1 - d];
        }
    return out;
}

VecX Model3D::free_values(const std::vector<Vec3>& nodal) const {
    if (static_cast<int>(nodal.size()) != node_count()) throw std::invalid_argument("nodal field size mismatch");
    VecX u(n_free_);
    for (int n = 0; n < node_count(); ++n)
        for (int c = 0; c < 3; ++c)
            if (dof_[3 * n + c] >= 0) u[dof_[3 * n + c]] = nodal[n][c];
    return u;
}

std::vector<Sym3> Model3D::unscaled_strain(const std::vector<Vec3>& nodal) const {
    if (static_cast<int>(nodal.size()) != node_count()) throw std::invalid_argument("nodal field size mismatch");
    std::vector<Sym3> out(static_cast<size_t>(n_elements_) * 8);
    Eigen::Matrix<double, 24, 1> ue;
    for (int e = 0; e < n_elements_; ++e) {
        const auto nodes = element_nodes(e);
        for (int a = 0; a < 8; ++a) ue.segment<3>(3 * a) = nodal[nodes[a]];
        for (int gp = 0; gp < 8; ++gp) out[e * 8 + gp] = Sym3::from_mandel(b_plain_[gp] * ue);
    }
    return out;
}

Mandel3 Model3D::sample(const Field& values, const Vec2& x, double x3) const {
    const double d[3] = {plane_.d1(), plane_.d2(), 1.0 / nz_};
    const double xs[3] = {x[0], x[1], x3 + 0.5};
    const int nc[3] = {plane_.n1 - 1, plane_.n2 - 1, nz_};
    int idx[3];
    double loc[3];
    for (int a = 0; a < 3; ++a) {
        idx[a] = std::clamp(static_cast<int>(std::floor(xs[a] / d[a])), 0, nc[a] - 1);
        // reference coordinate scaled so the Gauss points sit at -1 and +1
        loc[a] = (2 * (xs[a] / d[a] - idx[a]) - 1) / kG;
    }
    const int e = idx[0] + nc[0] * (idx[1] + nc[1] * idx[2]);
    Mandel3 v = Mandel3::Zero();
    for (int gp = 0; gp < 8; ++gp) {
        double wgt = 1;
        for (int a = 0; a < 3; ++a) wgt *= 0.5 * (1 + sgn((gp >> a) & 1) * loc[a]);
        v += wgt * values[e * 8 + gp];
    }
    return v;
}

SpatialField<Mandel3> Model3D::sampler(const Field& values) const {
    return [this, values](const Vec2& x, double x3) { return sample(values, x, x3); };
}

}  // namespace tsplate
