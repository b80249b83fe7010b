#pragma once

#include <map>
#include <vector>

#include "tsplate/discretization.hpp"

namespace tsplate {

//! Unknown numbering that separates free and prescribed entries.
class DofTable {
public:
    int add_free() {
        map_.push_back(free_++);
        fixed_flag_.push_back(false);
        return static_cast<int>(map_.size()) - 1;
    }
    int add_fixed(double unit_value) {
        map_.push_back(static_cast<int>(fixed_values_.size()));
        fixed_values_.push_back(unit_value);
        fixed_flag_.push_back(true);
        return static_cast<int>(map_.size()) - 1;
    }
    int size() const { return static_cast<int>(map_.size()); }
    int free_count() const { return free_; }
    int fixed_count() const { return static_cast<int>(fixed_values_.size()); }
    bool fixed(int id) const { return fixed_flag_[id]; }
    int local(int id) const { return map_[id]; }
    double& unit_value(int id) { return fixed_values_[map_[id]]; }
    const std::vector<double>& fixed_values() const { return fixed_values_; }

private:
    std::vector<int> map_;
    std::vector<bool> fixed_flag_;
    std::vector<double> fixed_values_;
    int free_ = 0;
};

//! Discretization given by explicit sparse strain matrices: the strain at point (c, q) is
//! (B0 x)_c + z_q (B1 x)_c, x collecting free and prescribed unknowns. B1 may be empty.
template <int D, int N>
class MatrixDiscretization : public Discretization<D, N> {
public:
    using typename Discretization<D, N>::VecD;
    using typename Discretization<D, N>::Field;
    using Triplets = std::vector<Eigen::Triplet<double>>;

    //! Rows of the triplet lists are c*D + component, columns are DofTable ids.
    void assemble(const DofTable& dofs, const Triplets& b0, const Triplets& b1, int columns,
                  std::vector<double> levels, std::vector<double> level_weights, std::vector<double> column_weights,
                  std::vector<int> law_ids, std::vector<PointLaw<D, N>> laws, const VecX& datum_all) {
        columns_ = columns;
        z_ = std::move(levels);
        zw_ = std::move(level_weights);
        colw_ = std::move(column_weights);
        law_id_ = std::move(law_ids);
        laws_ = std::move(laws);
        layered_ = !b1.empty();
        const int rows = columns * D;
        split(dofs, b0, rows, b0f_, b0d_);
        if (layered_) split(dofs, b1, rows, b1f_, b1d_);
        ud_ = Eigen::Map<const VecX>(dofs.fixed_values().data(), dofs.fixed_count());
        // datum strain from the extension given on all unknowns
        VecX ef(dofs.free_count()), ed(dofs.fixed_count());
        for (int id = 0; id < dofs.size(); ++id) (dofs.fixed(id) ? ed : ef)[dofs.local(id)] = datum_all[id];
        datum0_ = b0f_ * ef + b0d_ * ed;
        if (layered_) datum1_ = b1f_ * ef + b1d_ * ed;
        m1_ = m2_ = 0;
        for (size_t q = 0; q < z_.size(); ++q) {
            m1_ += zw_[q] * z_[q];
            m2_ += zw_[q] * z_[q] * z_[q];
        }
        if (std::abs(m1_) < 1e-15) m1_ = 0;
    }

    int free_dofs() const override { return static_cast<int>(b0f_.cols()); }
    int fixed_dofs() const override { return static_cast<int>(b0d_.cols()); }
    int columns() const override { return columns_; }
    const std::vector<double>& levels() const override { return z_; }
    const std::vector<double>& level_weights() const override { return zw_; }
    double column_weight(int c) const override { return colw_[c]; }
    const PointLaw<D, N>& law(int c) const override { return laws_[law_id_[c]]; }
    int law_id(int c) const { return law_id_[c]; }
    const std::vector<PointLaw<D, N>>& laws() const { return laws_; }
    const VecX& fixed_unit_values() const { return ud_; }

    SpMat stiffness() const override {
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(static_cast<size_t>(columns_) * D * D);
        for (int c = 0; c < columns_; ++c) {
            const auto& C = laws_[law_id_[c]].C;
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j)
                    if (C(i, j) != 0) t.emplace_back(c * D + i, c * D + j, colw_[c] * C(i, j));
        }
        SpMat w(columns_ * D, columns_ * D);
        w.setFromTriplets(t.begin(), t.end());
        SpMat k = SpMat(b0f_.transpose()) * (w * b0f_);
        if (layered_) {
            k += m2_ * (SpMat(b1f_.transpose()) * (w * b1f_));
            if (m1_ != 0) {
                SpMat cross = SpMat(b0f_.transpose()) * (w * b1f_);
                k += m1_ * (cross + SpMat(cross.transpose()));
            }
        }
        k.prune(0.0);
        return k.triangularView<Eigen::Lower>();
    }

    void strain(const VecX& u, double amplitude, Field& out) const override {
        strain_with_fixed(u, amplitude * ud_, out);
    }

    //! Strain for explicit prescribed values.
    void strain_with_fixed(const VecX& u, const VecX& ufixed, Field& out) const {
        const VecX t0 = b0f_ * u + b0d_ * ufixed;
        VecX t1;
        if (layered_) t1 = b1f_ * u + b1d_ * ufixed;
        expand(t0, layered_ ? &t1 : nullptr, out);
    }

    void divergence(const Field& s, VecX& r_free, VecX* r_fixed) const override {
        const int L = static_cast<int>(z_.size());
        VecX s0 = VecX::Zero(columns_ * D), s1;
        if (layered_) s1 = VecX::Zero(columns_ * D);
        for (int c = 0; c < columns_; ++c)
            for (int q = 0; q < L; ++q) {
                const VecD& v = s[c * L + q];
                s0.template segment<D>(c * D) += (colw_[c] * zw_[q]) * v;
                if (layered_) s1.template segment<D>(c * D) += (colw_[c] * zw_[q] * z_[q]) * v;
            }
        r_free = b0f_.transpose() * s0;
        if (layered_) r_free += b1f_.transpose() * s1;
        if (r_fixed) {
            *r_fixed = b0d_.transpose() * s0;
            if (layered_) *r_fixed += b1d_.transpose() * s1;
        }
    }

    void datum_strain(Field& out) const override { expand(datum0_, layered_ ? &datum1_ : nullptr, out); }

private:
    static void split(const DofTable& dofs, const Triplets& b, int rows, SpMat& bf, SpMat& bd) {
        Triplets tf, td;
        for (const auto& t : b) {
            const int id = t.col();
            (dofs.fixed(id) ? td : tf).emplace_back(t.row(), dofs.local(id), t.value());
        }
        bf.resize(rows, dofs.free_count());
        bd.resize(rows, dofs.fixed_count());
        bf.setFromTriplets(tf.begin(), tf.end());
        bd.setFromTriplets(td.begin(), td.end());
        bf.prune(0.0);
        bd.prune(0.0);
    }

    void expand(const VecX& t0, const VecX* t1, Field& out) const {
        const int L = static_cast<int>(z_.size());
        out.resize(static_cast<size_t>(columns_) * L);
        for (int c = 0; c < columns_; ++c)
            for (int q = 0; q < L; ++q) {
                VecD v = t0.template segment<D>(c * D);
                if (t1) v += z_[q] * t1->template segment<D>(c * D);
                out[c * L + q] = v;
            }
    }

    int columns_ = 0;
    std::vector<double> z_, zw_, colw_;
    std::vector<int> law_id_;
    std::vector<PointLaw<D, N>> laws_;
    bool layered_ = false;
    SpMat b0f_, b0d_, b1f_, b1d_;
    VecX ud_, datum0_, datum1_;
    double m1_ = 0, m2_ = 0;
};

}  // namespace tsplate
