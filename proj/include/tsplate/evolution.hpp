#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "tsplate/discretization.hpp"
#include "tsplate/linear_solver.hpp"

namespace tsplate {

struct SolverOptions {
    double tolerance = 1e-10;         // relative decrease of the incremental objective
    int max_iterations = 20000;
    double linear_tolerance = 1e-9;   // iterative solver tolerance and equilibrium target
    LinearSolverKind linear = LinearSolverKind::Cholesky;
    bool accelerate = true;           // extrapolated plastic iterates with monotone restart
};

//! One row of the evolution trace.
struct StepRecord {
    double t = 0, amplitude = 0;
    double Q = 0;            // elastic energy
    double H_inc = 0;        // dissipation of the plastic increment
    double D_cum = 0;        // cumulative dissipation
    double W_cum = 0;        // external work (midpoint rule)
    double balance = 0;      // |Q - Q0 + D - W|
    double stability = 0;    // max yield violation of the stress
    double equilibrium = 0;  // relative residual of the discrete equilibrium
    int iterations = 0;
    int restarts = 0;
    bool converged = true;
    bool monotone = true;    // accepted iterates never increased the objective
};

struct EvolutionTrace {
    std::vector<StepRecord> rows;
    //! max |balance| over max(W, Q + D), both over all steps.
    double relative_balance() const {
        double r = 0, s = 0;
        for (const auto& row : rows) {
            r = std::max(r, row.balance);
            s = std::max({s, std::abs(row.W_cum), row.Q + row.D_cum});
        }
        return s > 0 ? r / s : r;
    }
    bool all_converged() const {
        return std::all_of(rows.begin(), rows.end(), [](const StepRecord& r) { return r.converged; });
    }
};

//! Time-incremental solver: each step minimizes energy plus dissipation of the increment by
//! alternating an elastic solve (plastic strain as eigenstrain) with the pointwise return map.
template <int D, int N>
class Evolution {
public:
    using VecD = Eigen::Matrix<double, D, 1>;
    using Field = std::vector<VecD>;

    Evolution(const Discretization<D, N>& disc, const SolverOptions& opt)
        : disc_(disc), opt_(opt), solver_(opt.linear, opt.linear_tolerance) {
        if (!(opt.tolerance > 0) || !(opt.linear_tolerance > 0) || opt.max_iterations < 1)
            throw std::invalid_argument("solver tolerances must be positive");
        solver_.factor(disc_.stiffness());
        disc_.datum_strain(datum_);
        weights_.resize(disc_.point_count());
        for (int p = 0; p < disc_.point_count(); ++p) weights_[p] = disc_.point_weight(p);
    }

    //! Default initial state: elastic response to w(t0) with zero plastic strain. Throws if unstable.
    void initialize(double t, double amplitude) {
        P_.assign(disc_.point_count(), VecD::Zero());
        u_ = elastic_solve(P_, amplitude);
        finish_initialization(t, amplitude);
    }

    //! Custom initial state; throws if its stress violates the yield condition.
    void initialize(double t, double amplitude, const VecX& u, const Field& P) {
        if (u.size() != disc_.free_dofs() || static_cast<int>(P.size()) != disc_.point_count())
            throw std::invalid_argument("initial state has the wrong size");
        u_ = u;
        P_ = P;
        finish_initialization(t, amplitude);
    }

    //! Minimizer of the elastic energy with eigenstrain P at the given amplitude.
    VecX elastic_solve(const Field& P, double amplitude) {
        Field t0;
        disc_.strain(VecX::Zero(disc_.free_dofs()), amplitude, t0);
        Field s(t0.size());
        for (size_t p = 0; p < t0.size(); ++p) s[p] = disc_.point_law(static_cast<int>(p)).C * (P[p] - t0[p]);
        VecX rhs;
        disc_.divergence(s, rhs, nullptr);
        return solver_.solve(rhs, u_.size() == rhs.size() ? &u_ : nullptr);
    }

    //! Return map at every point from P_prev with total strain T; fills P and stress.
    void plastic_step(const Field& T, const Field& P_prev, Field& P, Field& stress) const {
        P.resize(T.size());
        stress.resize(T.size());
        for (size_t p = 0; p < T.size(); ++p) {
            const auto& law = disc_.point_law(static_cast<int>(p));
            const auto r = return_map(law, VecD(T[p] - P_prev[p]));
            P[p] = P_prev[p] + r.dp;
            stress[p] = r.stress;
        }
    }

    //! Advances to time t with datum amplitude a.
    StepRecord step(double t, double amplitude) {
        const Field P_prev = P_;
        Field Pk = P_prev, Pk_old = P_prev, Y(P_prev.size()), T, Pn, Sn;
        double J = std::numeric_limits<double>::infinity();
        double tk = 1;
        StepRecord rec;
        rec.converged = false;
        VecX u = u_;
        int it = 0;
        while (it < opt_.max_iterations) {
            double beta = 0;
            double tn = 1;
            if (opt_.accelerate) {
                tn = 0.5 * (1 + std::sqrt(1 + 4 * tk * tk));
                beta = (tk - 1) / tn;
            }
            for (size_t p = 0; p < Y.size(); ++p) Y[p] = Pk[p] + beta * (Pk[p] - Pk_old[p]);
            VecX un = elastic_solve(Y, amplitude);
            disc_.strain(un, amplitude, T);
            plastic_step(T, P_prev, Pn, Sn);
            ++it;
            const double Jn = objective(T, Pn, P_prev);
            if (Jn > J && beta > 0) {
                // extrapolation overshot: restart from the last accepted iterate
                tk = 1;
                Pk_old = Pk;
                ++rec.restarts;
                continue;
            }
            if (Jn > J + 1e-12 * std::abs(J)) rec.monotone = false;
            const double decrease = std::isinf(J) ? std::numeric_limits<double>::infinity() : (J - Jn);
            J = Jn;
            Pk_old = Pk;
            Pk = Pn;
            tk = tn;
            u = un;
            bool unchanged = true;
            for (size_t p = 0; p < Y.size() && unchanged; ++p) unchanged = (Pn[p] == Y[p]);
            const double eq = equilibrium_residual(Sn);
            rec.equilibrium = eq;
            if (eq <= opt_.linear_tolerance &&
                (unchanged || decrease <= opt_.tolerance * std::max(std::abs(Jn), tiny_energy()))) {
                rec.converged = true;
                break;
            }
        }
        rec.iterations = it;

        // commit
        u_ = u;
        P_ = Pk;
        Field stress(P_.size());
        disc_.strain(u_, amplitude, T);
        for (size_t p = 0; p < P_.size(); ++p) stress[p] = disc_.point_law(static_cast<int>(p)).C * (T[p] - P_[p]);
        double h_inc = 0, work = 0;
        for (size_t p = 0; p < P_.size(); ++p) {
            h_inc += weights_[p] * disc_.point_law(static_cast<int>(p)).dissipation(P_[p] - P_prev[p]);
            work += weights_[p] * 0.5 * (stress[p] + stress_[p]).dot(datum_[p]) * (amplitude - amplitude_);
        }
        stress_ = std::move(stress);
        amplitude_ = amplitude;
        D_cum_ += h_inc;
        W_cum_ += work;
        rec.t = t;
        rec.amplitude = amplitude;
        rec.Q = elastic_energy();
        rec.H_inc = h_inc;
        rec.D_cum = D_cum_;
        rec.W_cum = W_cum_;
        rec.balance = std::abs(rec.Q - Q0_ + D_cum_ - W_cum_);
        rec.stability = stability_residual(stress_);
        if (!rec.converged) rec.equilibrium = equilibrium_residual(stress_);
        return rec;
    }

    double objective(const Field& T, const Field& P, const Field& P_prev) const {
        double j = 0;
        for (size_t p = 0; p < T.size(); ++p) {
            const auto& law = disc_.point_law(static_cast<int>(p));
            j += weights_[p] * (law.energy(T[p] - P[p]) + law.dissipation(P[p] - P_prev[p]));
        }
        return j;
    }

    double elastic_energy() const {
        const Field e = elastic_strain();
        double q = 0;
        for (size_t p = 0; p < e.size(); ++p) q += weights_[p] * disc_.point_law(static_cast<int>(p)).energy(e[p]);
        return q;
    }

    //! Max over points of (gauge(stress) - 1)_+.
    double stability_residual(const Field& stress) const {
        double v = 0;
        for (size_t p = 0; p < stress.size(); ++p)
            v = std::max(v, disc_.point_law(static_cast<int>(p)).gauge(stress[p]) - 1);
        return v;
    }

    //! |B^T W s| over free unknowns relative to the norm over all unknowns.
    double equilibrium_residual(const Field& stress) const {
        VecX rf, rd;
        disc_.divergence(stress, rf, &rd);
        const double total = std::sqrt(rf.squaredNorm() + rd.squaredNorm());
        return total > 0 ? rf.norm() / total : 0.0;
    }

    const Discretization<D, N>& discretization() const { return disc_; }
    const VecX& u() const { return u_; }
    const Field& P() const { return P_; }
    const Field& stress() const { return stress_; }
    double amplitude() const { return amplitude_; }
    const std::vector<double>& weights() const { return weights_; }
    //! Elastic strain C^-1 stress at every point.
    Field elastic_strain() const {
        Field T;
        disc_.strain(u_, amplitude_, T);
        for (size_t p = 0; p < T.size(); ++p) T[p] -= P_[p];
        return T;
    }
    SpdSolver& linear_solver() { return solver_; }
    const Field& datum() const { return datum_; }
    StepRecord initial_record() const { return initial_; }

private:
    void finish_initialization(double t, double amplitude) {
        amplitude_ = amplitude;
        Field T;
        disc_.strain(u_, amplitude, T);
        stress_.resize(T.size());
        for (size_t p = 0; p < T.size(); ++p) stress_[p] = disc_.point_law(static_cast<int>(p)).C * (T[p] - P_[p]);
        const double viol = stability_residual(stress_);
        if (viol > 1e-8) throw std::runtime_error("initial state is not stable: yield violation " + std::to_string(viol));
        Q0_ = elastic_energy();
        D_cum_ = W_cum_ = 0;
        initial_ = StepRecord{};
        initial_.t = t;
        initial_.amplitude = amplitude;
        initial_.Q = Q0_;
        initial_.stability = viol;
        initial_.equilibrium = equilibrium_residual(stress_);
    }

    double tiny_energy() const { return 1e-300; }

    const Discretization<D, N>& disc_;
    SolverOptions opt_;
    SpdSolver solver_;
    VecX u_;
    Field P_, stress_, datum_;
    std::vector<double> weights_;
    double amplitude_ = 0, Q0_ = 0, D_cum_ = 0, W_cum_ = 0;
    StepRecord initial_;
};

//! Runs all steps of a time partition with amplitudes a(t_k); the first time initializes.
template <int D, int N>
EvolutionTrace run_evolution(Evolution<D, N>& ev, const std::vector<double>& times, const std::vector<double>& amps) {
    if (times.size() < 2 || times.size() != amps.size()) throw std::invalid_argument("need at least two time points");
    EvolutionTrace tr;
    ev.initialize(times[0], amps[0]);
    tr.rows.push_back(ev.initial_record());
    for (size_t k = 1; k < times.size(); ++k) tr.rows.push_back(ev.step(times[k], amps[k]));
    return tr;
}

//! Amplitude at which the elastic response to the unit datum first reaches the yield surface.
template <int D, int N>
double first_yield_amplitude(Evolution<D, N>& ev) {
    const auto& disc = ev.discretization();
    typename Evolution<D, N>::Field P(disc.point_count(), Eigen::Matrix<double, D, 1>::Zero()), T;
    const VecX u = ev.elastic_solve(P, 1.0);
    disc.strain(u, 1.0, T);
    double g = 0;
    for (int p = 0; p < disc.point_count(); ++p) {
        const auto& law = disc.point_law(p);
        g = std::max(g, law.gauge(law.C * T[p]));
    }
    if (!(g > 0)) throw std::runtime_error("datum produces no stress");
    return 1 / g;
}

}  // namespace tsplate
